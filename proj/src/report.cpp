#include "pikl/report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

#include <Eigen/Core>

namespace pikl {

namespace {

const char* kVersion = "0.1.0";

std::string hex64(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << v;
  return os.str();
}

std::string file_hash(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read output file '" + path + "' for the manifest");
  std::ostringstream buf;
  buf << in.rdbuf();
  return content_hash(buf.str());
}

std::string base_name(const std::string& path) {
  const auto slash = path.find_last_of('/');
  return slash == std::string::npos ? path : path.substr(slash + 1);
}

// Lambda and mu of the first row of each (estimator, n); they depend on n only.
std::map<std::pair<std::string, long>, const RunRow*> first_rows(const RunReport& report) {
  std::map<std::pair<std::string, long>, const RunRow*> out;
  for (const auto& r : report.rows) out.emplace(std::make_pair(r.estimator, r.n), &r);
  return out;
}

}  // namespace

std::string format_real(real v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_report_csv(const RunReport& report, std::ostream& os) {
  os << "schema_version,scenario,row_type,estimator,n,seed,m,lambda,mu,metric,error,std,count,used_lu\n";
  for (const auto& r : report.rows) {
    os << kSchemaVersion << ',' << report.scenario << ",seed," << r.estimator << ',' << r.n << ',' << r.seed
       << ',' << r.m << ',' << format_real(r.lambda) << ',' << format_real(r.mu) << ',' << r.metric << ','
       << format_real(r.error) << ",,1," << (r.used_lu ? 1 : 0) << '\n';
  }
  const auto first = first_rows(report);
  for (const auto& s : report.summary) {
    const RunRow& r = *first.at({s.estimator, s.n});
    os << kSchemaVersion << ',' << report.scenario << ",aggregate," << s.estimator << ',' << s.n << ",,"
       << r.m << ',' << format_real(r.lambda) << ',' << format_real(r.mu) << ',' << s.metric << ','
       << format_real(s.mean) << ',' << format_real(s.std) << ',' << s.count << ",\n";
  }
}

json report_to_json(const RunReport& report) {
  // Numbers are stored as the same text as in the CSV so both files agree
  // digit for digit.
  json rows = json::array();
  for (const auto& r : report.rows)
    rows.push_back({{"estimator", r.estimator},
                    {"n", r.n},
                    {"seed", r.seed},
                    {"m", r.m},
                    {"lambda", format_real(r.lambda)},
                    {"mu", format_real(r.mu)},
                    {"metric", r.metric},
                    {"error", format_real(r.error)},
                    {"used_lu", r.used_lu}});
  json summary = json::array();
  for (const auto& s : report.summary)
    summary.push_back({{"estimator", s.estimator},
                       {"n", s.n},
                       {"metric", s.metric},
                       {"mean", format_real(s.mean)},
                       {"std", format_real(s.std)},
                       {"count", s.count}});
  return json{{"schema_version", kSchemaVersion}, {"scenario", report.scenario}, {"rows", rows}, {"summary", summary}};
}

void write_timings_csv(const RunReport& report, std::ostream& os) {
  os << "schema_version,scenario,estimator,n,seed,seconds_assemble,seconds_fit,seconds_predict\n";
  for (const auto& r : report.rows)
    os << kSchemaVersion << ',' << report.scenario << ',' << r.estimator << ',' << r.n << ',' << r.seed << ','
       << format_real(r.seconds_assemble) << ',' << format_real(r.seconds_fit) << ','
       << format_real(r.seconds_predict) << '\n';
}

void write_wave_table_csv(const RunReport& report, real sigma, std::ostream& os) {
  os << "schema_version,method,n,sigma,metric,mean,std,count\n";
  for (const auto& s : report.summary)
    os << kSchemaVersion << ',' << s.estimator << ',' << s.n << ',' << format_real(sigma) << ',' << s.metric
       << ',' << format_real(s.mean) << ',' << format_real(s.std) << ',' << s.count << '\n';
}

void write_effdim_csv(const std::string& name, const std::vector<EffDimPoint>& points, std::ostream& os) {
  os << "schema_version,name,m,n,lambda,mu,N_eff\n";
  for (const auto& p : points)
    os << kSchemaVersion << ',' << name << ',' << p.m << ',' << format_real(p.n) << ',' << format_real(p.lambda)
       << ',' << format_real(p.mu) << ',' << format_real(p.n_eff) << '\n';
}

void write_spectrum_csv(const SpectrumReport& spectrum, std::ostream& os) {
  os << "schema_version,k,sigma\n";
  for (Eigen::Index k = 0; k < spectrum.eigenvalues.size(); ++k)
    os << kSchemaVersion << ',' << (k + 1) << ',' << format_real(spectrum.eigenvalues(k)) << '\n';
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string content_hash(const std::string& bytes) { return hex64(fnv1a64(bytes)); }

std::string config_hash(const json& config) { return content_hash(config.dump()); }

json build_info() {
  std::ostringstream eigen;
  eigen << EIGEN_WORLD_VERSION << '.' << EIGEN_MAJOR_VERSION << '.' << EIGEN_MINOR_VERSION;
#if defined(__clang__)
  const std::string compiler = std::string("clang ") + __clang_version__;
#elif defined(__GNUC__)
  const std::string compiler = std::string("gcc ") + __VERSION__;
#else
  const std::string compiler = "unknown";
#endif
  return json{{"pikl", kVersion},
              {"schema_version", kSchemaVersion},
              {"eigen", eigen.str()},
              {"json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." + std::to_string(NLOHMANN_JSON_VERSION_MINOR) +
                           "." + std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
              {"compiler", compiler},
              {"real_bits", 64}};
}

json make_manifest(const std::string& command, const json& config, unsigned threads,
                   const std::vector<std::string>& output_files) {
  json outputs = json::object();
  for (const auto& f : output_files) outputs[base_name(f)] = file_hash(f);
  return json{{"manifest_version", 1},
              {"command", command},
              {"config", config},
              {"config_hash", config_hash(config)},
              {"threads", threads},
              {"build", build_info()},
              {"outputs", outputs}};
}

}  // namespace pikl
