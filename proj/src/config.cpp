#include "supchain/config.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "supchain/report.hpp"

namespace supchain {

namespace {

std::string trim(const std::string& s) {
  std::size_t begin = 0;
  std::size_t end = s.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(s[begin]))) ++begin;
  while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1]))) --end;
  return s.substr(begin, end - begin);
}

class KeyValues {
 public:
  explicit KeyValues(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      std::string stripped = trim(line);
      if (stripped.empty()) continue;
      auto eq = stripped.find('=');
      if (eq == std::string::npos) {
        throw ConfigError("", "line " + std::to_string(lineno) + ": expected key = value");
      }
      std::string key = trim(stripped.substr(0, eq));
      std::string value = trim(stripped.substr(eq + 1));
      if (key.empty()) {
        throw ConfigError("", "line " + std::to_string(lineno) + ": empty key");
      }
      if (values_.count(key)) {
        throw ConfigError(key, "duplicate key");
      }
      values_[key] = value;
    }
  }

  std::optional<std::string> take(const std::string& key) {
    auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    std::string value = it->second;
    values_.erase(it);
    return value;
  }

  double take_real(const std::string& key, double fallback) {
    auto raw = take(key);
    if (!raw) return fallback;
    return parse_real(key, *raw);
  }

  std::optional<double> take_real_opt(const std::string& key) {
    auto raw = take(key);
    if (!raw) return std::nullopt;
    return parse_real(key, *raw);
  }

  long take_long(const std::string& key, long fallback) {
    auto raw = take(key);
    if (!raw) return fallback;
    char* end = nullptr;
    long value = std::strtol(raw->c_str(), &end, 10);
    if (end == raw->c_str() || *end != '\0') {
      throw ConfigError(key, "expected an integer, got '" + *raw + "'");
    }
    return value;
  }

  std::uint64_t take_u64(const std::string& key, std::uint64_t fallback) {
    auto raw = take(key);
    if (!raw) return fallback;
    char* end = nullptr;
    std::uint64_t value = std::strtoull(raw->c_str(), &end, 0);
    if (end == raw->c_str() || *end != '\0') {
      throw ConfigError(key, "expected an unsigned integer, got '" + *raw + "'");
    }
    return value;
  }

  void reject_leftovers() const {
    if (!values_.empty()) {
      throw ConfigError(values_.begin()->first, "unknown key");
    }
  }

  static double parse_real(const std::string& key, const std::string& raw) {
    char* end = nullptr;
    double value = std::strtod(raw.c_str(), &end);
    if (end == raw.c_str() || *end != '\0') {
      throw ConfigError(key, "expected a real number, got '" + raw + "'");
    }
    return value;
  }

 private:
  std::map<std::string, std::string> values_;
};

std::vector<double> parse_eps_list(const std::string& raw) {
  std::vector<double> eps;
  std::istringstream in(raw);
  std::string field;
  while (std::getline(in, field, ',')) {
    std::string item = trim(field);
    if (item.empty()) {
      throw ConfigError("eps_list", "empty entry");
    }
    eps.push_back(KeyValues::parse_real("eps_list", item));
  }
  if (eps.empty()) {
    throw ConfigError("eps_list", "must contain at least one value");
  }
  return eps;
}

}  // namespace

LabConfig parse_config_text(const std::string& text) {
  KeyValues kv(text);
  LabConfig config;
  ExperimentConfig& experiment = config.experiment;

  auto model_name = kv.take("model");
  if (!model_name) {
    throw ConfigError("model", "required (indicator or cpp)");
  }

  auto eps_raw = kv.take("eps_list");
  if (!eps_raw) {
    throw ConfigError("eps_list", "required (comma separated, strictly decreasing)");
  }
  experiment.eps_list = parse_eps_list(*eps_raw);
  double lead_eps = experiment.eps_list.front();

  experiment.params.alpha = kv.take_real("alpha", 1.0);
  experiment.params.beta = kv.take_real("beta", 2.0);
  experiment.params.gamma = kv.take_real("gamma", experiment.params.alpha / 2.0);
  experiment.params.delta = kv.take_real("delta", 0.5);
  experiment.t0 = kv.take_real("t0", 0.5);
  experiment.n_max = static_cast<int>(kv.take_long("n_max", 20));
  experiment.grid_exponent = static_cast<int>(kv.take_long("grid_exponent", 10));
  experiment.replicates = kv.take_long("replicates", 10000);
  experiment.seed = kv.take_u64("seed", kDefaultSeed);
  experiment.threads = static_cast<int>(kv.take_long("threads", 0));

  if (auto mode = kv.take("sup_mode")) {
    if (*mode == "centered") {
      experiment.sup_mode = SupMode::centered;
    } else if (*mode == "absolute") {
      experiment.sup_mode = SupMode::absolute;
    } else {
      throw ConfigError("sup_mode", "expected 'centered' or 'absolute', got '" + *mode + "'");
    }
  }
  if (auto theory = kv.take("theory")) {
    if (*theory == "full") {
      experiment.theory = true;
    } else if (*theory == "none") {
      experiment.theory = false;
    } else {
      throw ConfigError("theory", "expected 'full' or 'none', got '" + *theory + "'");
    }
  }

  auto forbid = [&kv](const char* key, const char* why) {
    if (kv.take(key)) {
      throw ConfigError(key, why);
    }
  };

  if (*model_name == "indicator") {
    const char* why = "not applicable to the indicator model";
    forbid("kernel", why);
    forbid("hoelder_p", why);
    forbid("kernel_c_scale", why);
    forbid("rho", why);
    forbid("c", why);
    forbid("tau_rel_tol", why);
    forbid("tau_fixed", why);
    experiment.model = IndicatorModel{lead_eps};
  } else if (*model_name == "cpp") {
    CppModel model;
    model.intensity.rho = kv.take_real("rho", 0.5);
    model.intensity.c = kv.take_real("c", 1.0);
    std::string kernel_name = kv.take("kernel").value_or("linear");
    if (kernel_name == "linear") {
      forbid("hoelder_p", "only applies to the hoelder kernel");
      model.kernel = KernelSpec::linear();
    } else if (kernel_name == "sinusoid") {
      forbid("hoelder_p", "only applies to the hoelder kernel");
      model.kernel = KernelSpec::sinusoid();
    } else if (kernel_name == "hoelder") {
      auto p = kv.take_real_opt("hoelder_p");
      if (!p) {
        throw ConfigError("hoelder_p", "required for the hoelder kernel");
      }
      model.kernel = KernelSpec::hoelder(*p);
    } else {
      throw ConfigError("kernel", "expected linear, sinusoid, or hoelder, got '" + kernel_name +
                                      "'");
    }
    if (auto scale = kv.take_real_opt("kernel_c_scale")) {
      model.kernel.c_scale = *scale;  // audit hook: declare a different constant
    }
    model.eps = lead_eps;
    model.tau.rel_tolerance = kv.take_real("tau_rel_tol", 1e-4);
    model.tau.t0_ref = experiment.t0;
    model.tau.fixed_tau = kv.take_real_opt("tau_fixed");
    experiment.model = model;
  } else {
    throw ConfigError("model", "expected 'indicator' or 'cpp', got '" + *model_name + "'");
  }

  config.out_csv = kv.take("out_csv").value_or("");
  config.out_json = kv.take("out_json").value_or("");
  kv.reject_leftovers();

  experiment.validate();
  return config;
}

LabConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError("", "cannot open config file '" + path + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

std::string config_to_text(const LabConfig& config) {
  const ExperimentConfig& experiment = config.experiment;
  std::ostringstream out;
  auto real = [](double x) { return format_double(x); };
  if (const auto* ind = std::get_if<IndicatorModel>(&experiment.model)) {
    out << "model = indicator\n";
    (void)ind;
  } else {
    const auto& model = std::get<CppModel>(experiment.model);
    out << "model = cpp\n";
    out << "kernel = " << model.kernel.name() << "\n";
    if (model.kernel.family == KernelFamily::hoelder) {
      out << "hoelder_p = " << real(model.kernel.p) << "\n";
    }
    KernelSpec declared = model.kernel.family == KernelFamily::linear ? KernelSpec::linear()
                          : model.kernel.family == KernelFamily::sinusoid
                              ? KernelSpec::sinusoid()
                              : KernelSpec::hoelder(model.kernel.p);
    if (model.kernel.c_scale != declared.c_scale) {
      out << "kernel_c_scale = " << real(model.kernel.c_scale) << "\n";
    }
    out << "rho = " << real(model.intensity.rho) << "\n";
    out << "c = " << real(model.intensity.c) << "\n";
    out << "tau_rel_tol = " << real(model.tau.rel_tolerance) << "\n";
    if (model.tau.fixed_tau) {
      out << "tau_fixed = " << real(*model.tau.fixed_tau) << "\n";
    }
  }
  out << "eps_list = ";
  for (std::size_t i = 0; i < experiment.eps_list.size(); ++i) {
    if (i) out << ", ";
    out << real(experiment.eps_list[i]);
  }
  out << "\n";
  out << "alpha = " << real(experiment.params.alpha) << "\n";
  out << "beta = " << real(experiment.params.beta) << "\n";
  out << "gamma = " << real(experiment.params.gamma) << "\n";
  out << "delta = " << real(experiment.params.delta) << "\n";
  out << "t0 = " << real(experiment.t0) << "\n";
  out << "n_max = " << experiment.n_max << "\n";
  out << "grid_exponent = " << experiment.grid_exponent << "\n";
  out << "replicates = " << experiment.replicates << "\n";
  out << "seed = " << experiment.seed << "\n";
  out << "threads = " << experiment.threads << "\n";
  out << "sup_mode = " << (experiment.sup_mode == SupMode::centered ? "centered" : "absolute")
      << "\n";
  out << "theory = " << (experiment.theory ? "full" : "none") << "\n";
  if (!config.out_csv.empty()) out << "out_csv = " << config.out_csv << "\n";
  if (!config.out_json.empty()) out << "out_json = " << config.out_json << "\n";
  return out.str();
}

}  // namespace supchain
