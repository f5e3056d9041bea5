#include "supchain/report.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace supchain {

std::string format_double(double x) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", x);
  return buffer;
}

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, sep)) fields.push_back(field);
  return fields;
}

double parse_real(const std::string& field) {
  char* end = nullptr;
  double value = std::strtod(field.c_str(), &end);
  if (end == field.c_str() || *end != '\0') {
    throw std::runtime_error("csv: malformed real value '" + field + "'");
  }
  return value;
}

}  // namespace

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = kSweepCsvHeader;
  out += '\n';
  for (const SweepRow& row : rows) {
    out += format_double(row.eps);
    out += ',';
    out += format_double(row.b_eps);
    out += ',';
    out += format_double(row.var_t0);
    out += ',';
    out += format_double(row.entropy_sum);
    out += ',';
    out += format_double(row.constant);
    out += ',';
    out += format_double(row.theory_bound);
    out += ',';
    out += format_double(row.empirical_prob);
    out += ',';
    out += format_double(row.ci_low);
    out += ',';
    out += format_double(row.ci_high);
    out += ',';
    out += std::to_string(row.replicates);
    out += ',';
    out += std::to_string(row.seed);
    out += '\n';
  }
  return out;
}

std::vector<SweepRow> parse_sweep_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kSweepCsvHeader) {
    throw std::runtime_error("csv: missing or unexpected header");
  }
  std::vector<SweepRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto fields = split(line, ',');
    if (fields.size() != 11) {
      throw std::runtime_error("csv: expected 11 fields per row");
    }
    SweepRow row;
    row.eps = parse_real(fields[0]);
    row.b_eps = parse_real(fields[1]);
    row.var_t0 = parse_real(fields[2]);
    row.entropy_sum = parse_real(fields[3]);
    row.constant = parse_real(fields[4]);
    row.theory_bound = parse_real(fields[5]);
    row.empirical_prob = parse_real(fields[6]);
    row.ci_low = parse_real(fields[7]);
    row.ci_high = parse_real(fields[8]);
    row.replicates = std::strtol(fields[9].c_str(), nullptr, 10);
    row.seed = std::strtoull(fields[10].c_str(), nullptr, 10);
    rows.push_back(row);
  }
  return rows;
}

std::string bound_csv(const std::vector<SweepRow>& rows) {
  std::string out = "eps,b_eps,var_t0,entropy_sum,constant_C,theory_bound\n";
  for (const SweepRow& row : rows) {
    out += format_double(row.eps);
    out += ',';
    out += format_double(row.b_eps);
    out += ',';
    out += format_double(row.var_t0);
    out += ',';
    out += format_double(row.entropy_sum);
    out += ',';
    out += format_double(row.constant);
    out += ',';
    out += format_double(row.theory_bound);
    out += '\n';
  }
  return out;
}

std::string audit_csv(const std::vector<MomentAuditRow>& rows) {
  std::string out = "s,t,mc_moment,std_error,closed_form,bound,replicates,ok\n";
  for (const MomentAuditRow& row : rows) {
    out += format_double(row.s);
    out += ',';
    out += format_double(row.t);
    out += ',';
    out += format_double(row.mc_moment);
    out += ',';
    out += format_double(row.std_error);
    out += ',';
    out += format_double(row.closed_form);
    out += ',';
    out += format_double(row.bound);
    out += ',';
    out += std::to_string(row.replicates);
    out += ',';
    out += (row.ok ? "1" : "0");
    out += '\n';
  }
  return out;
}

std::string sweep_summary_json(const SupExperimentResult& result,
                               const std::vector<HypothesisCheck>& hypotheses,
                               const ExperimentConfig& config) {
  nlohmann::json summary;
  summary["pass"] = result.pass;
  summary["checks"] = nlohmann::json::array();
  for (const auto& check : result.checks) {
    summary["checks"].push_back(
        {{"name", check.name}, {"pass", check.pass}, {"detail", check.detail}});
  }
  summary["hypotheses"] = nlohmann::json::array();
  for (const auto& check : hypotheses) {
    summary["hypotheses"].push_back(
        {{"name", check.name}, {"pass", check.pass}, {"detail", check.detail}});
  }
  summary["rows"] = result.rows.size();
  summary["eps"] = nlohmann::json::array();
  for (const auto& row : result.rows) summary["eps"].push_back(row.eps);
  summary["replicates"] = config.replicates;
  summary["seed"] = config.seed;
  summary["grid_exponent"] = config.grid_exponent;
  summary["sup_mode"] = (config.sup_mode == SupMode::centered) ? "centered" : "absolute";
  summary["theory"] = config.theory;
  return summary.dump(2) + "\n";
}

void write_text_file(const std::string& path, const std::string& text) {
  std::filesystem::path target(path);
  std::filesystem::path temp = target;
  temp += ".tmp";
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw std::runtime_error("cannot open '" + temp.string() + "' for writing");
    }
    out << text;
    out.flush();
    if (!out) {
      throw std::runtime_error("write failed for '" + temp.string() + "'");
    }
  }
  std::error_code ec;
  std::filesystem::rename(temp, target, ec);
  if (ec) {
    throw std::runtime_error("cannot move '" + temp.string() + "' to '" + target.string() +
                             "': " + ec.message());
  }
}

}  // namespace supchain
