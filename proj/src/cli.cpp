#include "hdperm/cli.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <sstream>

#include "hdperm/errors.hpp"

namespace hdperm {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, ',')) out.push_back(trim(cur));
  return out;
}

Eigen::VectorXd parse_vector(const std::string& s, int size) {
  // A shorter list is padded with zeros, so sparse leading coefficients can
  // be written as e.g. "0,1,1".
  Eigen::VectorXd v = Eigen::VectorXd::Zero(size);
  auto parts = split_list(s);
  if (static_cast<int>(parts.size()) > size)
    throw Error("vector override longer than its dimension");
  for (std::size_t i = 0; i < parts.size(); ++i) v(static_cast<int>(i)) = std::stod(parts[i]);
  return v;
}

std::string record_value(const TestOutcome& o, const std::string& key, const MethodSpec& spec) {
  if (key == "method") return o.method;
  if (key == "p") return format_g17(o.p_value);
  if (key == "T1") return format_g17(o.statistics.front());
  if (key == "w") return std::to_string(o.statistics.size());
  if (key == "seed") return std::to_string(spec.seed);
  if (key == "lambda") return o.lambda ? format_g17(*o.lambda) : "";
  if (key == "lambda_x") return o.lambda_x ? format_g17(*o.lambda_x) : "";
  if (key == "statistic_kind") return to_string(o.statistic_kind);
  if (key == "sidedness") return o.sidedness == Sidedness::Two ? "two" : "one";
  return "";
}

const std::vector<std::string> kRecordKeys = {"method",   "p",        "T1",
                                              "w",        "seed",     "lambda",
                                              "lambda_x", "statistic_kind", "sidedness"};

void emit_record(const TestOutcome& o, const MethodSpec& spec, OutputFormat format,
                 std::ostream& out) {
  if (format == OutputFormat::Json) {
    out << '{';
    bool first = true;
    for (const auto& key : kRecordKeys) {
      std::string val = record_value(o, key, spec);
      if (!first) out << ',';
      first = false;
      out << '"' << key << "\":";
      if (key == "method" || key == "statistic_kind" || key == "sidedness")
        out << '"' << val << '"';
      else if (val.empty())
        out << "null";
      else
        out << val;
    }
    out << "}\n";
    return;
  }
  bool first = true;
  for (const auto& key : kRecordKeys) {
    if (!first) out << '\t';
    first = false;
    out << key;
  }
  out << '\n';
  first = true;
  for (const auto& key : kRecordKeys) {
    if (!first) out << '\t';
    first = false;
    out << record_value(o, key, spec);
  }
  out << '\n';
}

} // namespace

int cmd_test(const RunConfig& config, std::ostream& out, std::ostream& err) {
  IngestResult ingest;
  try {
    ingest = ingest_csv(config.input_path, config.roles, config.standardize);
  } catch (const Error& e) {
    err << "input error: " << e.what() << '\n';
    return 2;
  }
  try {
    MethodSpec spec = config.spec;
    TestOutcome outcome = run_test(ingest.data, spec);
    emit_record(outcome, spec, config.format, out);
    return 0;
  } catch (const ZeroVariance& e) {
    err << "degenerate statistic for interest column '" << ingest.interest_names.front()
        << "': " << e.what() << '\n';
    return 3;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
}

Scenario scenario_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open scenario file " + path);
  Scenario s = preset("table3"); // baseline defaults; every field overridable
  s.name = path;
  std::string line;
  while (std::getline(in, line)) {
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    auto eq = t.find('=');
    if (eq == std::string::npos) throw ParseError("scenario line without '=': " + t);
    apply_override(s, trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
  }
  return s;
}

void apply_override(Scenario& s, const std::string& key, const std::string& value) {
  if (key == "n") s.n = std::stoi(value);
  else if (key == "d") {
    s.d = std::stoi(value);
    Eigen::VectorXd beta = Eigen::VectorXd::Zero(s.d);
    beta.head(std::min<int>(s.d, static_cast<int>(s.beta.size()))) =
        s.beta.head(std::min<int>(s.d, static_cast<int>(s.beta.size())));
    s.beta = beta;
  } else if (key == "q") {
    s.q = std::stoi(value);
    Eigen::VectorXd gamma = Eigen::VectorXd::Zero(s.q);
    gamma.head(std::min<int>(s.q, static_cast<int>(s.gamma.size()))) =
        s.gamma.head(std::min<int>(s.q, static_cast<int>(s.gamma.size())));
    s.gamma = gamma;
  } else if (key == "beta") s.beta = parse_vector(value, s.d);
  else if (key == "gamma") s.gamma = parse_vector(value, s.q);
  else if (key == "rho") s.design.rho = std::stod(value);
  else if (key == "design") {
    s.design.kind = value == "clusters" ? Design::Kind::Clusters : Design::Kind::Homogeneous;
  } else if (key == "cluster_sizes") {
    s.design.cluster_sizes.clear();
    for (const auto& p : split_list(value)) s.design.cluster_sizes.push_back(std::stoi(p));
  } else if (key == "rho_within") s.design.rho_within = std::stod(value);
  else if (key == "error_law") s.error_law = error_law_from_string(value);
  else if (key == "reps") s.reps = std::stoi(value);
  else if (key == "w") s.w = std::stoi(value);
  else if (key == "seed") s.master_seed = std::stoull(value);
  else if (key == "alphas") {
    s.alphas.clear();
    for (const auto& p : split_list(value)) s.alphas.push_back(std::stod(p));
  } else if (key == "methods") {
    s.methods.clear();
    for (const auto& p : split_list(value)) {
      MethodSpec spec;
      spec.method = method_from_string(p);
      s.methods.push_back(spec);
    }
  } else if (key == "kind") {
    TransformKind kind =
        value == "flip" ? TransformKind::SignFlip : TransformKind::Permutation;
    for (auto& m : s.methods) m.kind = kind;
  } else if (key == "psi") {
    Psi psi = value == "mean" ? Psi::MeanAbs : Psi::MaxAbs;
    for (auto& m : s.methods) m.psi = psi;
  } else {
    throw Error("invalid override key: " + key);
  }
}

int cmd_simulate(const SimulateConfig& config, std::ostream& out, std::ostream& err) {
  try {
    Scenario s;
    std::ifstream probe(config.preset_or_file);
    const auto names = preset_names();
    if (std::find(names.begin(), names.end(), config.preset_or_file) != names.end())
      s = preset(config.preset_or_file, config.mode);
    else if (probe.good())
      s = scenario_from_file(config.preset_or_file);
    else
      throw UnknownPreset("neither a preset nor a readable file: " + config.preset_or_file);

    for (const auto& [key, value] : config.overrides) apply_override(s, key, value);
    RejectionTable table = run_scenario(s);
    out << to_tsv(table);
    if (table.failed_reps > 0) {
      err << table.failed_reps << " of " << table.reps << " repetitions failed";
      for (const auto& msg : table.failure_messages) err << "; " << msg;
      err << '\n';
    }
    return 0;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
}

int cmd_presets(std::ostream& out) {
  for (const auto& name : preset_names()) out << name << '\n';
  out << '\n' << preset_registry_note() << '\n';
  return 0;
}

} // namespace hdperm
