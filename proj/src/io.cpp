#include "twinslit/io.hpp"

#include <cstdio>
#include <fstream>

#include <nlohmann/json.hpp>

#include "twinslit/errors.hpp"

namespace twinslit {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);  // binary: byte-identical across platforms
  if (!out) throw IoError("cannot open for writing: " + path);
  return out;
}

void finish(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace

std::string format_double(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

void write_records_csv(const std::string& path, const std::vector<DetectionRecord>& records) {
  std::ofstream out = open_out(path);
  out << "trajectory_id,status,y0_initial,y1_final,y2_final\n";
  for (const auto& r : records) {
    out << r.trajectory_id << ',' << to_string(r.status) << ',' << format_double(r.y0_initial)
        << ',' << format_double(r.y1_final) << ',' << format_double(r.y2_final) << '\n';
  }
  finish(out, path);
}

void write_pattern_csv(const std::string& path, const Pattern& pattern) {
  std::ofstream out = open_out(path);
  out << "bin_left,bin_right,count,normalized_density\n";
  const Eigen::ArrayXd dens = pattern.normalized_density();
  for (int i = 0; i < pattern.bins(); ++i) {
    out << format_double(pattern.edges[i]) << ',' << format_double(pattern.edges[i + 1]) << ','
        << format_double(pattern.counts[i]) << ',' << format_double(dens[i]) << '\n';
  }
  finish(out, path);
}

void write_trajectories_csv(const std::string& path, const WaveFunctionSpec& spec,
                            const std::vector<Trajectory>& trajectories) {
  std::ofstream out = open_out(path);
  out << "trajectory_id,t,y1,y2,v1,v2\n";
  for (std::size_t id = 0; id < trajectories.size(); ++id) {
    for (const auto& s : trajectories[id].samples) {
      const auto v = try_velocity(spec, s);
      out << id << ',' << format_double(s.t) << ',' << format_double(s.y1) << ','
          << format_double(s.y2) << ',' << format_double(v ? v->v1 : 0.0) << ','
          << format_double(v ? v->v2 : 0.0) << '\n';
    }
  }
  finish(out, path);
}

void write_json_file(const std::string& path, const nlohmann::json& j) {
  std::ofstream out = open_out(path);
  out << j.dump(2) << '\n';
  finish(out, path);
}

nlohmann::json pattern_to_json(const Pattern& pattern) {
  nlohmann::json j;
  j["bin_width"] = pattern.bin_width;
  j["total_weight"] = pattern.total_weight;
  j["edges"] = std::vector<double>(pattern.edges.begin(), pattern.edges.end());
  j["counts"] = std::vector<double>(pattern.counts.begin(), pattern.counts.end());
  return j;
}

nlohmann::json divergence_to_json(const DivergenceReport& report) {
  nlohmann::json j;
  j["ks"] = report.ks;
  j["total_variation"] = report.tv;
  j["chi2"] = report.chi2;
  j["chi2_dof"] = report.chi2_dof;
  j["chi2_p_value"] = report.chi2_p_value;
  return j;
}

nlohmann::json regime_to_json(const std::vector<RegimeFinding>& findings) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& f : findings) {
    nlohmann::json j;
    j["name"] = f.name;
    j["value"] = f.value;
    j["threshold"] = f.threshold;
    j["satisfied"] = f.satisfied;
    j["detail"] = f.detail;
    arr.push_back(std::move(j));
  }
  return arr;
}

}  // namespace twinslit
