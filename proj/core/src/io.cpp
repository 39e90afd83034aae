#include "ssalt/io.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <nlohmann/json.hpp>
#include <sstream>

#include "ssalt/error.hpp"

namespace ssalt::io {

namespace {

using nlohmann::json;

std::string format17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& field, std::size_t line) {
  const std::string f = trim(field);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(f, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (f.empty() || used != f.size() || !std::isfinite(v)) {
    throw DomainError("line " + std::to_string(line) + ": bad number '" + f +
                      "'");
  }
  return v;
}

json meta_json(const RunMetadata& meta) {
  return {{"seed", meta.seed},
          {"config", meta.config},
          {"config_hash", meta.config_hash()},
          {"version", meta.version}};
}

json matrix_json(const Mat7& m) {
  json rows = json::array();
  for (int r = 0; r < 7; ++r) {
    json row = json::array();
    for (int s = 0; s < 7; ++s) row.push_back(m(r, s));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

std::string RunMetadata::config_hash() const {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : config) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return buf;
}

void write_metadata_lines(std::ostream& os, const RunMetadata& meta) {
  os << "#seed=" << meta.seed << '\n'
     << "#config_hash=" << meta.config_hash() << '\n'
     << "#version=" << meta.version << '\n'
     << "#config=" << meta.config << '\n';
}

void write_dataset(std::ostream& os, const Dataset& data,
                   const RunMetadata* meta) {
  if (meta != nullptr) write_metadata_lines(os, *meta);
  os << "delta,t,y\n";
  const std::size_t m = data.plan.levels();
  for (const auto& obs : data.observations) {
    os << delta_code(obs, m) << ',' << format17(observed_time(obs, data.plan))
       << ',' << format17(observed_marker(obs)) << '\n';
  }
}

void write_dataset(const std::string& path, const Dataset& data,
                   const RunMetadata* meta) {
  std::ofstream os(path);
  if (!os) throw DomainError("cannot open '" + path + "' for writing");
  write_dataset(os, data, meta);
  if (!os) throw DomainError("failed writing '" + path + "'");
}

Dataset parse_dataset(std::istream& is, const StressPlan& plan) {
  plan.validate();
  Dataset data;
  data.plan = plan;
  const int m = static_cast<int>(plan.levels());
  std::string line;
  std::size_t lineno = 0;
  bool header_seen = false;
  while (std::getline(is, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (!header_seen) {
      std::string compact;
      for (char c : t) {
        if (c != ' ' && c != '\t') compact += c;
      }
      if (compact != "delta,t,y") {
        throw DomainError("line " + std::to_string(lineno) +
                          ": expected header 'delta,t,y'");
      }
      header_seen = true;
      continue;
    }
    std::vector<std::string> fields;
    std::stringstream ss(t);
    std::string f;
    while (std::getline(ss, f, ',')) fields.push_back(f);
    if (fields.size() != 3) {
      throw DomainError("line " + std::to_string(lineno) +
                        ": expected 3 fields");
    }
    const double delta_value = parse_number(fields[0], lineno);
    const double time = parse_number(fields[1], lineno);
    const double marker = parse_number(fields[2], lineno);
    const int delta = static_cast<int>(delta_value);
    if (delta != delta_value || delta < 1 || delta > m + 1) {
      throw DomainError("line " + std::to_string(lineno) + ": delta must be 1.." +
                        std::to_string(m + 1));
    }
    if (delta == m + 1) {
      if (std::abs(time - plan.censor_time) > 1e-9 * plan.censor_time) {
        throw DomainError("line " + std::to_string(lineno) +
                          ": censored rows must carry t = C");
      }
      data.observations.push_back(CensoredObs{marker});
    } else {
      data.observations.push_back(FailedObs{delta, time, marker});
    }
  }
  data.validate();
  return data;
}

Dataset parse_dataset(const std::string& path, const StressPlan& plan) {
  std::ifstream is(path);
  if (!is) throw DomainError("cannot open '" + path + "'");
  return parse_dataset(is, plan);
}

std::map<std::string, std::string> read_metadata(std::istream& is) {
  std::map<std::string, std::string> out;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] != '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    out[line.substr(1, eq - 1)] = line.substr(eq + 1);
  }
  return out;
}

std::string to_json(const FitResult& fit, const RunMetadata& meta) {
  const auto names = natural_parameter_names(fit.theta_hat.levels());
  const auto values = fit.theta_hat.to_vector();
  json theta = json::object();
  for (std::size_t i = 0; i < names.size(); ++i) theta[names[i]] = values[i];
  json j = {{"metadata", meta_json(meta)},
            {"theta_hat", theta},
            {"loglik", fit.loglik},
            {"converged", fit.converged},
            {"iterations", fit.iterations},
            {"best_start", fit.best_start},
            {"gradient_norm", fit.gradient_norm}};
  if (fit.theta_link_hat) {
    const auto a = fit.theta_link_hat->to_array();
    json link = json::object();
    for (std::size_t i = 0; i < a.size(); ++i) link[kThetaStarNames[i]] = a[i];
    j["theta_link_hat"] = link;
  }
  if (fit.standard_errors) {
    json se = json::object();
    for (std::size_t i = 0; i < names.size(); ++i) {
      const double v = (*fit.standard_errors)[i];
      se[names[i]] = std::isfinite(v) ? json(v) : json(nullptr);
    }
    j["standard_errors"] = se;
  }
  return j.dump(2);
}

std::string to_json(const PosteriorSummary& summary, const RunMetadata& meta) {
  json rows = json::array();
  for (const auto& r : summary.rows) {
    rows.push_back({{"parameter", r.name},
                    {"mean", r.mean},
                    {"std", r.std},
                    {"mc_error", r.mc_error},
                    {"q2.5", r.q025},
                    {"median", r.median},
                    {"q97.5", r.q975}});
  }
  return json{{"metadata", meta_json(meta)},
              {"kept", summary.kept},
              {"acceptance_rate", summary.acceptance_rate},
              {"parameters", rows}}
      .dump(2);
}

std::string to_json(const InfoMatrix& info, const RunMetadata& meta) {
  return json{{"metadata", meta_json(meta)},
              {"order", natural_parameter_names(2)},
              {"n", info.n},
              {"tau", info.tau},
              {"quadrature", {{"abs_tol", info.abs_tol}, {"rel_tol", info.rel_tol}}},
              {"matrix", matrix_json(info.matrix)}}
      .dump(2);
}

std::string to_json(const McStudyReport& report, const RunMetadata& meta) {
  json rows = json::array();
  for (const auto& r : report.rows) {
    rows.push_back({{"parameter", r.name},
                    {"truth", r.truth},
                    {"mean", r.mean},
                    {"rbias", r.rbias},
                    {"rrmse", r.rrmse}});
  }
  return json{{"metadata", meta_json(meta)},
              {"replicates", report.replicates},
              {"sample_size", report.sample_size},
              {"nonconverged", report.nonconverged},
              {"rows", rows}}
      .dump(2);
}

std::string to_json(const std::vector<PlanResult>& rows,
                    const RunMetadata& meta) {
  json arr = json::array();
  for (const auto& r : rows) {
    arr.push_back({{"p", r.p},
                   {"xi_p", r.xi_p},
                   {"tau_star", r.tau_star},
                   {"avar", r.avar},
                   {"cv", r.cv},
                   {"g1_tau", r.g1_tau},
                   {"g2_rem", r.g2_rem}});
  }
  return json{{"metadata", meta_json(meta)}, {"plans", arr}}.dump(2);
}

void write_mc_csv(std::ostream& os, const McStudyReport& report,
                  const RunMetadata* meta) {
  if (meta != nullptr) write_metadata_lines(os, *meta);
  os << "parameter,truth,mean,rbias,rrmse\n" << std::setprecision(10);
  for (const auto& r : report.rows) {
    os << r.name << ',' << r.truth << ',' << r.mean << ',' << r.rbias << ','
       << r.rrmse << '\n';
  }
}

}  // namespace ssalt::io
