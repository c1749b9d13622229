#include <doctest.h>

#include <cmath>

#include "twinslit/wavefunction.hpp"

using namespace twinslit;

namespace {

WaveFunctionSpec spec_of(WaveKind kind, double Y = 1.0, double k_y = 0.0) {
  PhysicalConfig c;
  c.slit_offset_Y = Y;
  c.k_y = k_y;
  return make_wavefunction_spec(kind, c);
}

}  // namespace

TEST_CASE("complex packet width: sigma_t(2) = 1 + i at defaults") {
  const PhysicalConfig c;
  const Complex s = sigma_t(c, 2.0);
  CHECK(s.real() == doctest::Approx(1.0));
  CHECK(s.imag() == doctest::Approx(1.0));
  CHECK(sigma_t(c, 0.0) == Complex(1.0, 0.0));
}

TEST_CASE("packet peak magnitude matches the Gaussian normal form") {
  const auto spec = spec_of(WaveKind::UnentangledProduct);
  // At t=0 the packet centered at Y has |value| = (2 pi sigma0^2)^(-1/4) there.
  const double peak0 = std::abs(packet(spec, Slit::A, 1.0, 0.0));
  CHECK(peak0 == doctest::Approx(std::pow(2.0 * M_PI, -0.25)).epsilon(1e-12));
  // At tau=1 the envelope has spread sigma0*sqrt(2).
  const double peak_t = std::abs(packet(spec, Slit::A, 1.0, 2.0));
  CHECK(peak_t == doctest::Approx(std::pow(4.0 * M_PI, -0.25)).epsilon(1e-12));
}

TEST_CASE("mirror identity: packet_A(y) equals packet_B(-y) bit for bit") {
  const auto spec = spec_of(WaveKind::EntangledSymmetric, 1.0, 0.35);
  for (double t : {0.0, 0.6, 2.0}) {
    const PacketCache cache = make_packet_cache(spec, t);
    for (double y : {-2.3, -0.4, 0.0, 0.9, 3.1}) {
      const Complex a = packet(cache, Slit::A, y);
      const Complex b = packet(cache, Slit::B, -y);
      CHECK(a.real() == b.real());
      CHECK(a.imag() == b.imag());
    }
  }
}

TEST_CASE("exchange symmetry of the two-particle amplitudes") {
  const auto sym = spec_of(WaveKind::EntangledSymmetric);
  const auto anti = spec_of(WaveKind::EntangledAntisymmetric);
  for (double t : {0.0, 1.3}) {
    for (double y1 : {-1.2, 0.4}) {
      for (double y2 : {-0.7, 2.0}) {
        const Complex ps = psi(sym, {y1, y2, t});
        const Complex ps_x = psi(sym, {y2, y1, t});
        CHECK(std::abs(ps - ps_x) <= 1e-15 * std::abs(ps));
        const Complex pa = psi(anti, {y1, y2, t});
        const Complex pa_x = psi(anti, {y2, y1, t});
        CHECK(std::abs(pa + pa_x) <= 1e-15 * std::abs(pa));
      }
    }
  }
}

TEST_CASE("antisymmetric amplitude vanishes exactly on the diagonal") {
  const auto anti = spec_of(WaveKind::EntangledAntisymmetric, 1.0, 0.2);
  for (double t : {0.0, 0.8, 2.0})
    for (double y : {-1.5, 0.0, 0.3, 2.4}) CHECK(psi(anti, {y, y, t}) == Complex(0.0, 0.0));
}

TEST_CASE("reflection through the axis maps the entangled density to itself") {
  for (WaveKind kind : {WaveKind::EntangledSymmetric, WaveKind::EntangledAntisymmetric}) {
    const auto spec = spec_of(kind, 1.0, 0.5);
    for (double t : {0.0, 1.1}) {
      for (double y1 : {-0.9, 0.25, 1.7}) {
        for (double y2 : {-2.0, 0.6}) {
          const double d = density(spec, {y1, y2, t});
          const double dr = density(spec, {-y1, -y2, t});
          CHECK(dr == doctest::Approx(d).epsilon(1e-12));
        }
      }
    }
  }
}

TEST_CASE("unentangled amplitude factorizes") {
  const auto spec = spec_of(WaveKind::UnentangledProduct, 0.8, 0.1);
  const double t = 0.9;
  const PacketCache cache = make_packet_cache(spec, t);
  for (double y1 : {-1.0, 0.2, 1.4}) {
    for (double y2 : {-0.3, 0.8}) {
      const Complex s1 = packet(cache, Slit::A, y1) + packet(cache, Slit::B, y1);
      const Complex s2 = packet(cache, Slit::A, y2) + packet(cache, Slit::B, y2);
      const Complex p = psi(spec, {y1, y2, t});
      CHECK(std::abs(p - s1 * s2) <= 1e-14 * std::abs(p));
    }
  }
}

TEST_CASE("log-domain evaluation keeps deep tails finite and positive") {
  const auto spec = spec_of(WaveKind::UnentangledProduct, 0.05);
  const Complex far = packet(spec, Slit::A, 40.0, 0.0);
  CHECK(std::isfinite(far.real()));
  CHECK(std::isfinite(far.imag()));
  CHECK(std::abs(far) > 0.0);
  CHECK(std::abs(far) < 1e-100);
  const double d = density(spec, {40.0, -1.0, 0.0});
  CHECK(std::isfinite(d));
  CHECK(d >= 0.0);
}

TEST_CASE("packet_dlog matches a finite-difference log-derivative") {
  const auto spec = spec_of(WaveKind::EntangledSymmetric, 1.0, 0.4);
  const double t = 0.5, h = 1e-6;
  const PacketCache cache = make_packet_cache(spec, t);
  for (Slit slit : {Slit::A, Slit::B}) {
    for (double y : {-1.1, 0.3, 2.2}) {
      const Complex num =
          (packet(cache, slit, y + h) - packet(cache, slit, y - h)) / (2.0 * h);
      const Complex fd = num / packet(cache, slit, y);
      const Complex an = packet_dlog(cache, slit, y);
      CHECK(std::abs(fd - an) <= 1e-6 * (1.0 + std::abs(an)));
    }
  }
}

TEST_CASE("density is the squared modulus and non-negative on a grid") {
  const auto spec = spec_of(WaveKind::EntangledAntisymmetric);
  for (double y1 = -3.0; y1 <= 3.0; y1 += 0.75) {
    for (double y2 = -3.0; y2 <= 3.0; y2 += 0.75) {
      const ConfigurationPoint p{y1, y2, 1.0};
      const double d = density(spec, p);
      CHECK(d >= 0.0);
      CHECK(d == doctest::Approx(std::norm(psi(spec, p))).epsilon(1e-14));
    }
  }
}

TEST_CASE("initial-time form: packet at t=0 is a plain Gaussian times the carrier") {
  // At t=0 the complex width collapses to sigma0, so the amplitude must be
  // exp(-(y-Y)^2 / (4 sigma0^2)) times the constant prefactor.
  PhysicalConfig c;
  c.k_y = 0.7;
  const auto spec = make_wavefunction_spec(WaveKind::UnentangledProduct, c);
  for (double y = -3.0; y <= 3.0; y += 0.5) {
    const Complex v = packet(spec, Slit::A, y, 0.0);
    const double expected_mag =
        std::pow(2.0 * M_PI, -0.25) * std::exp(-(y - 1.0) * (y - 1.0) / 4.0);
    CHECK(std::abs(v) == doctest::Approx(expected_mag).epsilon(1e-12));
    const double expected_phase = c.k_y * (y - 1.0);
    const double got_phase = std::arg(v);
    CHECK(std::remainder(got_phase - expected_phase, 2.0 * M_PI) ==
          doctest::Approx(0.0).epsilon(1e-10));
  }
}

TEST_CASE("peak_composite_amplitude tracks the spreading envelope") {
  const auto spec = spec_of(WaveKind::EntangledSymmetric);
  const double p0 = peak_composite_amplitude(spec, 0.0);
  CHECK(p0 == doctest::Approx(2.0 * std::pow(2.0 * M_PI, -0.5)).epsilon(1e-12));
  const double p2 = peak_composite_amplitude(spec, 2.0);
  CHECK(p2 == doctest::Approx(2.0 * std::pow(4.0 * M_PI, -0.5)).epsilon(1e-12));
  CHECK(p2 < p0);
}
