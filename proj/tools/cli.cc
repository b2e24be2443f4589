#include "cli.h"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "qauth/auth_schemes.h"
#include "qauth/codes.h"
#include "qauth/errors.h"
#include "qauth/protocol_sim.h"
#include "qauth/purity_analysis.h"
#include "qauth/selftest.h"
#include "qauth/version.h"

namespace qauth::cli {

using json = nlohmann::json;

namespace {

// Expands `--config FILE` (or `--config=FILE`) into ordinary arguments. The
// file is a flat JSON object whose keys are long option names; arrays feed
// multi-valued options, `true` sets a flag and `false` leaves it unset.
// Options given explicitly on the command line take precedence.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::vector<std::string> out;
  std::optional<std::string> path;
  for (size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) {
        throw std::invalid_argument("--config needs a file name");
      }
      path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
    } else {
      out.push_back(args[i]);
    }
  }
  if (!path) {
    return out;
  }
  std::ifstream in(*path);
  if (!in) {
    throw std::invalid_argument("cannot read config file '" + *path + "'");
  }
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::invalid_argument("malformed JSON config '" + *path + "': " + e.what());
  }
  if (!j.is_object()) {
    throw std::invalid_argument("JSON config '" + *path + "' must be an object");
  }
  auto given = [&out](const std::string& flag) {
    return std::any_of(out.begin(), out.end(),
                       [&flag](const std::string& a) { return a == flag || a.rfind(flag + "=", 0) == 0; });
  };
  auto scalar = [](const json& v) -> std::string {
    if (v.is_string()) {
      return v.get<std::string>();
    }
    if (v.is_number() || v.is_boolean()) {
      return v.dump();
    }
    throw std::invalid_argument("config values must be strings, numbers, booleans or arrays of those");
  };
  for (const auto& [key, value] : j.items()) {
    std::string flag = "--" + key;
    std::replace(flag.begin() + 2, flag.end(), '_', '-');
    if (given(flag)) {
      continue;
    }
    if (value.is_boolean()) {
      if (value.get<bool>()) {
        out.push_back(flag);
      }
    } else if (value.is_array()) {
      for (const auto& v : value) {
        out.push_back(flag);
        out.push_back(scalar(v));
      }
    } else {
      out.push_back(flag);
      out.push_back(scalar(value));
    }
  }
  return out;
}

struct CommonOptions {
  std::string output;
  std::string format = "json";
  uint64_t seed = 1;
  unsigned shards = 1;
  bool no_timestamp = false;
};

struct FamilyOptions {
  std::string family;
  size_t index = 0;
  size_t n = 0;
  size_t m = 1;
  size_t t = 6;
};

void add_common(CLI::App* sub, CommonOptions& c) {
  // Expanded before parsing (see expand_config); registered here for --help.
  sub->add_option("--config", "JSON file of options (keys are long option names)");
  sub->add_option("--output,-o", c.output, "Report path (default: $QAUTH_OUTPUT_DIR/<command>.<format> or stdout)");
  sub->add_option("--format", c.format, "Report format")->check(CLI::IsMember({"json", "csv"}));
  sub->add_option("--seed", c.seed, "Root 64-bit seed for every random stream");
  sub->add_option("--shards", c.shards, "Worker threads; results do not depend on this")->check(CLI::Range(1u, 1024u));
  sub->add_flag("--no-timestamp", c.no_timestamp, "Omit the timestamp field so reports are byte-identical");
}

void add_family(CLI::App* sub, FamilyOptions& f, bool allow_code) {
  std::vector<std::string> kinds = {"trap", "strong-trap", "clifford"};
  if (allow_code) {
    kinds.insert(kinds.begin(), "rm-css");
  }
  sub->add_option("--family", f.family, "Code family")->required()->check(CLI::IsMember(kinds));
  sub->add_option("--index", f.index, "Reed–Muller family index i (inner code length 2^(2i+1)-1)");
  sub->add_option("--n", f.n, "Inner code length (7 or 31), alternative to --index");
  sub->add_option("--m", f.m, "Message qubits (clifford)");
  sub->add_option("--t", f.t, "Tag qubits (clifford)");
}

size_t resolve_index(const FamilyOptions& f) {
  if (f.index > 0 && f.n > 0 && (size_t{1} << (2 * f.index + 1)) - 1 != f.n) {
    throw std::invalid_argument("--index " + std::to_string(f.index) + " and --n " + std::to_string(f.n) +
                                " disagree");
  }
  if (f.index > 0) {
    return f.index;
  }
  if (f.n > 0) {
    for (size_t i = 1; i <= 7; ++i) {
      if ((size_t{1} << (2 * i + 1)) - 1 == f.n) {
        return i;
      }
    }
    throw std::invalid_argument("--n " + std::to_string(f.n) + " is not a punctured Reed–Muller length 2^(2i+1)-1");
  }
  return 1;
}

std::string inner_ref(size_t index) { return "rm-css:" + std::to_string(index); }

AuthFamily make_family(const FamilyOptions& f) {
  if (f.family == "clifford") {
    if (f.m + f.t > 4096) {
      throw std::invalid_argument("clifford family too large");
    }
    return AuthFamily::clifford(f.m, f.t);
  }
  size_t index = resolve_index(f);
  if (f.family == "trap") {
    return AuthFamily::trap(rm_css(index), inner_ref(index));
  }
  if (f.family == "strong-trap") {
    return AuthFamily::strong_trap(rm_css(index), inner_ref(index));
  }
  throw std::invalid_argument("family '" + f.family + "' is a code, not an authentication family");
}

json pauli_json(const PauliOp& p) {
  return {{"n", p.num_qubits()}, {"x", p.x().to_hex()}, {"z", p.z().to_hex()}, {"pauli", p.str()}};
}

json family_json(const AuthFamily& f) {
  json j = {{"kind", to_string(f.kind())}, {"m", f.m()}, {"t", f.t()}, {"num_qubits", f.num_qubits()}};
  if (f.is_trap_kind()) {
    j["inner_code_ref"] = f.inner_ref();
    j["n"] = f.block_size();
  } else {
    j["inner_code_ref"] = nullptr;
    j["n"] = f.num_qubits();
  }
  return j;
}

json key_json(const Key& k) {
  json j = {{"kind", to_string(k.kind)}, {"seed", k.seed}};
  if (k.kind == FamilyKind::CLIFFORD) {
    json gates = json::array();
    for (const auto& g : k.clifford_gates) {
      gates.push_back(g.str());
    }
    j["gates"] = gates;
  } else {
    j["permutation"] = k.permutation;
  }
  return j;
}

json rows_hex(const std::vector<BitVec>& rows) {
  json out = json::array();
  for (const auto& r : rows) {
    out.push_back(r.to_hex());
  }
  return out;
}

json optional_size(const std::optional<size_t>& v) { return v ? json(*v) : json(nullptr); }

json code_json(const CssCode& css, size_t index) {
  return {{"family", "rm-css"},
          {"index", index},
          {"n", css.n},
          {"m", css.m},
          {"d", optional_size(css.distance)},
          {"benign_d", optional_size(css.benign_distance)},
          {"generator_rows_hex", rows_hex(css.c1.generator())},
          {"c2_rows_hex", rows_hex(css.c2.generator())},
          {"logical_x_hex", rows_hex(css.logical_x)},
          {"encoder_gates", css.encoder.gates().size()}};
}

json bound_json(const Bound& b) { return {{"value", b.value}, {"formula", b.formula}}; }

json estimate_json(const EpsilonEstimate& e) {
  json j = {{"flavor", to_string(e.flavor)},
            {"mode", to_string(e.mode)},
            {"value", e.value},
            {"ci_low", e.ci_low},
            {"ci_high", e.ci_high},
            {"successes", e.successes},
            {"n_samples", e.n_samples},
            {"bound", bound_json(e.bound)},
            {"identity_attack", e.identity_attack}};
  if (e.exact) {
    j["exact"] = *e.exact;
  }
  return j;
}

json interval_json(const Interval& i) { return {{"low", i.low}, {"high", i.high}}; }

std::string timestamp_now() {
  std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void flatten_csv(const json& j, const std::string& prefix, std::string& out) {
  if (j.is_object() || j.is_array()) {
    size_t i = 0;
    for (const auto& [key, value] : j.items()) {
      std::string name = j.is_array() ? std::to_string(i++) : key;
      flatten_csv(value, prefix.empty() ? name : prefix + "." + name, out);
    }
    return;
  }
  std::string value = j.is_string() ? j.get<std::string>() : j.dump();
  if (value.find_first_of(",\"\n") != std::string::npos) {
    std::string quoted = "\"";
    for (char ch : value) {
      quoted += ch;
      if (ch == '"') {
        quoted += '"';
      }
    }
    value = quoted + "\"";
  }
  out += prefix + "," + value + "\n";
}

// What a subcommand produces: the JSON result plus an optional bespoke CSV.
struct Outcome {
  json result;
  json parameters = json::object();
  std::optional<json> family;
  std::optional<std::string> csv;
  int exit_code = kExitOk;
  std::string status = "ok";
};

class Runner {
 public:
  Runner(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

  int run(const std::vector<std::string>& args);

 private:
  void emit(const std::string& command, const Outcome& o);

  std::ostream& out_;
  std::ostream& err_;
  CommonOptions common_;
  FamilyOptions family_;
};

void Runner::emit(const std::string& command, const Outcome& o) {
  std::string text;
  if (common_.format == "csv") {
    if (o.csv) {
      text = *o.csv;
    } else {
      text = "key,value\n";
      flatten_csv(o.result, "", text);
    }
  } else {
    json report = {{"tool", "qauth"},
                   {"schema_version", 1},
                   {"version", kVersion},
                   {"command", command},
                   {"status", o.status},
                   {"seed", common_.seed},
                   {"shards", common_.shards},
                   {"parameters", o.parameters},
                   {"result", o.result}};
    if (o.family) {
      report["family"] = *o.family;
    }
    if (!common_.no_timestamp) {
      report["timestamp"] = timestamp_now();
    }
    text = report.dump(2) + "\n";
  }

  std::string path = common_.output;
  if (path.empty()) {
    if (const char* dir = std::getenv(kOutputDirEnv); dir != nullptr && *dir != '\0') {
      std::filesystem::create_directories(dir);
      path = (std::filesystem::path(dir) / (command + "." + common_.format)).string();
    }
  }
  if (path.empty()) {
    out_ << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) {
    throw std::runtime_error("cannot write report to '" + path + "'");
  }
  file << text;
}

int Runner::run(const std::vector<std::string>& args) {
  CLI::App app("Quantum authentication codes: purity testing and key-reuse experiments", "qauth");
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  std::function<Outcome()> action;
  std::string command;

  // build-code
  auto* build = app.add_subcommand("build-code", "Build a CSS code or sample a family key and describe it");
  add_common(build, common_);
  add_family(build, family_, true);
  build->callback([&] {
    command = "build-code";
    action = [&] {
      Outcome o;
      if (family_.family == "rm-css") {
        size_t index = resolve_index(family_);
        o.result = code_json(rm_css(index), index);
        o.parameters = {{"family", "rm-css"}, {"index", index}};
        return o;
      }
      AuthFamily f = make_family(family_);
      Key k = key_for_index(f, common_.seed, 0);
      o.family = family_json(f);
      o.result = {{"family", family_json(f)}, {"key", key_json(k)}, {"encoder_gates", encoder(f, k).gates().size()}};
      o.parameters = {{"family", family_.family}};
      return o;
    };
  });

  // analyze-code
  auto* analyze = app.add_subcommand("analyze-code", "Distances, weight distributions and weight sparsity of a code");
  add_common(analyze, common_);
  add_family(analyze, family_, true);
  analyze->callback([&] {
    command = "analyze-code";
    action = [&] {
      if (family_.family == "clifford") {
        throw std::invalid_argument("analyze-code needs a CSS code family (rm-css, trap or strong-trap)");
      }
      size_t index = resolve_index(family_);
      CssCode css = rm_css(index);
      SparsityReport sr = sparsity_report(css);
      WeightDistribution c1 = weight_distribution(css.c1);
      WeightDistribution c2 = weight_distribution(css.c2);
      Outcome o;
      o.parameters = {{"family", family_.family}, {"index", index}};
      o.result = code_json(css, index);
      o.result["f_X"] = sr.f_x;
      o.result["f_X_weight"] = sr.f_x_weight;
      o.result["c1_weight_distribution"] = c1.counts;
      o.result["c2_weight_distribution"] = c2.counts;
      o.result["sparsity"] = {{"benign", sr.benign},
                              {"all", sr.all},
                              {"ratio", sr.ratio},
                              {"middle_range", sr.middle_range},
                              {"rcw_ok", sr.rcw_ok},
                              {"rcw_all_ok", sr.rcw_all_ok},
                              {"full_word_excluded", sr.full_word_excluded},
                              {"entropy_eighth", sr.entropy_eighth},
                              {"entropy_check", sr.entropy_check},
                              {"tail_ratio_max", sr.tail_ratio_max}};
      std::ostringstream csv;
      csv.precision(10);
      csv << "w,benign,all,ratio\n";
      for (size_t w = 0; w < sr.ratio.size(); ++w) {
        csv << w << "," << sr.benign[w] << "," << sr.all[w] << "," << sr.ratio[w] << "\n";
      }
      o.csv = csv.str();
      return o;
    };
  });

  // sweep-epsilon
  SweepConfig sweep;
  size_t random_paulis = 0;
  auto* sweep_cmd = app.add_subcommand("sweep-epsilon", "Per-weight-class undetected probabilities vs. the family bound");
  add_common(sweep_cmd, common_);
  add_family(sweep_cmd, family_, false);
  sweep_cmd->add_option("--max-weight", sweep.max_weight, "Largest total attack weight");
  sweep_cmd->add_option("--exhaustive-weight", sweep.exhaustive_weight, "Enumerate classes up to this weight in full");
  sweep_cmd->add_option("--reps", sweep.reps_per_class, "Random representatives per sampled class");
  sweep_cmd->add_option("--keys", sweep.n_keys, "Keys per attack")->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--random-paulis", random_paulis, "Extra uniformly random non-identity attacks");
  sweep_cmd->callback([&] {
    command = "sweep-epsilon";
    action = [&] {
      AuthFamily f = make_family(family_);
      sweep.seed = common_.seed;
      sweep.shards = common_.shards;
      Rng rng = make_rng(common_.seed, Stream::ATTACK, uint64_t{1} << 40);
      for (size_t i = 0; i < random_paulis; ++i) {
        PauliOp p(f.num_qubits());
        do {
          p = sample_otp(f, rng);
        } while (p.is_identity());
        sweep.extra_attacks.push_back(std::move(p));
      }
      SweepReport r = epsilon_sweep(f, sweep);
      Outcome o;
      o.family = family_json(f);
      o.parameters = {{"max_weight", sweep.max_weight},   {"exhaustive_weight", sweep.exhaustive_weight},
                      {"reps", sweep.reps_per_class},     {"keys", sweep.n_keys},
                      {"random_paulis", random_paulis}};
      json rows = json::array();
      for (const auto& row : r.rows) {
        rows.push_back({{"class", row.weight_class ? json(row.weight_class->str()) : json(nullptr)},
                        {"worst_attack", row.worst_attack},
                        {"members", row.members},
                        {"exhaustive", row.exhaustive},
                        {"estimate", estimate_json(row.estimate)}});
      }
      o.result = {{"rows", rows},
                  {"max_pt", estimate_json(r.max_pt)},
                  {"max_spt", estimate_json(r.max_spt)},
                  {"pt_within_bound", r.pt_within_bound},
                  {"spt_within_bound", r.spt_within_bound}};
      o.csv = sweep_csv(r);
      return o;
    };
  });

  // leakage
  std::string attack_text;
  std::string condition = "accept";
  size_t position = 0;
  uint64_t leak_keys = 10000;
  bool exact = false;
  auto* leak = app.add_subcommand("leakage", "Posterior of a position's block type given the verdict on an attack");
  add_common(leak, common_);
  add_family(leak, family_, false);
  leak->add_option("--attack", attack_text, "Attack Pauli string over IXYZ_ (default: X on qubit 0)");
  leak->add_option("--condition", condition, "Conditioning event")->check(CLI::IsMember({"accept", "reject"}));
  leak->add_option("--position", position, "Physical position whose block type is examined");
  leak->add_option("--keys", leak_keys, "Keys sampled (Monte-Carlo mode)")->check(CLI::PositiveNumber);
  leak->add_flag("--exact", exact, "Enumerate placements instead of sampling keys");
  leak->callback([&] {
    command = "leakage";
    action = [&] {
      AuthFamily f = make_family(family_);
      PauliOp attack = attack_text.empty() ? PauliOp::single(f.num_qubits(), 0, 'X') : PauliOp::from_string(attack_text);
      check_dims(attack.num_qubits(), f.num_qubits(), "--attack");
      Condition cond = condition == "accept" ? Condition::ACCEPT : Condition::REJECT;
      Outcome o;
      o.family = family_json(f);
      o.parameters = {{"attack", pauli_json(attack)},
                      {"condition", condition},
                      {"position", position},
                      {"keys", leak_keys},
                      {"exact", exact}};
      try {
        LeakageReport r = exact ? exact_key_posterior(f, attack, cond, position)
                                : key_posterior(f, attack, cond, position, leak_keys, common_.seed, common_.shards);
        o.result = {{"attack", r.attack},   {"condition", to_string(r.condition)},
                    {"position", r.position}, {"mode", to_string(r.mode)},
                    {"samples", r.n_keys},  {"events", r.events},
                    {"prior", r.prior},     {"posterior", r.posterior},
                    {"block_order", {"data", "zero-trap", "plus-trap"}},
                    {"tv_distance", r.tv_distance}};
      } catch (const GuardError& e) {
        if (e.code() != "NO_EVENT") {
          throw;
        }
        o.status = "NO_EVENT";
        o.exit_code = kExitGuard;
        o.result = {{"guard", e.code()}, {"message", e.what()}};
      }
      return o;
    };
  });

  // probe-attack
  std::string bases_text = "xz";
  size_t runs = 1;
  auto* probe = app.add_subcommand("probe-attack", "Locate traps with single-qubit probes under one key, then forge");
  add_common(probe, common_);
  add_family(probe, family_, false);
  probe->add_option("--bases", bases_text, "Probe bases")->check(CLI::IsMember({"xz", "x-only"}));
  probe->add_option("--runs", runs, "Independent runs (each with its own key)")->check(CLI::PositiveNumber);
  probe->callback([&] {
    command = "probe-attack";
    action = [&] {
      AuthFamily f = make_family(family_);
      ProbeBases bases = bases_text == "xz" ? ProbeBases::XZ : ProbeBases::X_ONLY;
      auto probe_json = [](const ProbeReport& r) {
        json inferred = json::array();
        json truth = json::array();
        for (auto b : r.inferred) {
          inferred.push_back(to_string(b));
        }
        for (auto b : r.truth) {
          truth.push_back(to_string(b));
        }
        return json{{"seed", r.seed},
                    {"bases", to_string(r.bases)},
                    {"probes_used", r.probes_used},
                    {"probes_accepted", r.probes_accepted},
                    {"inferred_blocks", inferred},
                    {"true_blocks", truth},
                    {"block_map_accuracy", r.block_map_accuracy},
                    {"forgery_attack", r.forgery_attack},
                    {"forgery_verdict", to_string(r.forgery_verdict)},
                    {"forgery_logical_action",
                     r.forgery_logical_action ? json(r.forgery_logical_action->str()) : json(nullptr)}};
      };
      Outcome o;
      o.family = family_json(f);
      o.parameters = {{"bases", bases_text}, {"runs", runs}};
      if (runs == 1) {
        o.result = probe_json(adaptive_probe(f, common_.seed, bases));
        return o;
      }
      uint64_t forged = 0;
      uint64_t probes_accepted = 0;
      double accuracy_sum = 0.0;
      double accuracy_min = 1.0;
      json first;
      for (size_t r = 0; r < runs; ++r) {
        ProbeReport p = adaptive_probe(f, derive_seed(common_.seed, Stream::TRIAL, r), bases);
        forged += p.forgery_verdict == DetectionClass::ACCEPTED_FORGED ? 1 : 0;
        probes_accepted += p.probes_accepted;
        accuracy_sum += p.block_map_accuracy;
        accuracy_min = std::min(accuracy_min, p.block_map_accuracy);
        if (r == 0) {
          first = probe_json(p);
        }
      }
      o.result = {{"runs", runs},
                  {"forged", forged},
                  {"forge_rate", static_cast<double>(forged) / static_cast<double>(runs)},
                  {"forge_ci", interval_json(clopper_pearson(forged, runs))},
                  {"probes_accepted", probes_accepted},
                  {"block_map_accuracy_mean", accuracy_sum / static_cast<double>(runs)},
                  {"block_map_accuracy_min", accuracy_min},
                  {"first_run", first}};
      return o;
    };
  });

  // parallel-reuse
  std::string strategy_name = "probe-all";
  uint64_t trials = 1000;
  size_t probe_pos = 0;
  size_t target_pos = 1;
  std::string basis = "X";
  size_t budget = 0;
  size_t weight = 1;
  std::vector<std::string> script_probes;
  std::string on_accept;
  std::string on_reject;
  uint64_t epsilon_keys = 1000;
  auto* reuse = app.add_subcommand("parallel-reuse", "Ciphertexts sharing one code key: forge the last one");
  add_common(reuse, common_);
  add_family(reuse, family_, false);
  reuse->add_option("--strategy", strategy_name, "Adversary strategy")
      ->check(CLI::IsMember({"identity", "single-probe", "probe-all", "random-pauli", "custom"}));
  reuse->add_option("--trials", trials, "Independent sessions")->check(CLI::PositiveNumber);
  reuse->add_option("--probe-pos", probe_pos, "single-probe: probed position");
  reuse->add_option("--target-pos", target_pos, "single-probe: attacked position on the second ciphertext");
  reuse->add_option("--basis", basis, "single-probe: Pauli used")->check(CLI::IsMember({"X", "Y", "Z"}));
  reuse->add_option("--bases", bases_text, "probe-all: probe bases")->check(CLI::IsMember({"xz", "x-only"}));
  reuse->add_option("--budget", budget, "probe-all: maximum probe ciphertexts (0 = all)");
  reuse->add_option("--weight", weight, "random-pauli: attack weight");
  reuse->add_option("--probes", script_probes, "custom: probe Pauli strings");
  reuse->add_option("--on-accept", on_accept, "custom: target attack when every probe was accepted");
  reuse->add_option("--on-reject", on_reject, "custom: target attack otherwise");
  reuse->add_option("--epsilon-keys", epsilon_keys, "Keys for the weight<=2 SPT sweep behind the 2ε budget (0 = skip)");
  reuse->callback([&] {
    command = "parallel-reuse";
    action = [&] {
      AuthFamily f = make_family(family_);
      const size_t total = f.num_qubits();
      std::unique_ptr<AdversaryStrategy> strategy;
      if (strategy_name == "identity") {
        strategy = std::make_unique<IdentityStrategy>();
      } else if (strategy_name == "single-probe") {
        strategy = std::make_unique<SingleProbeStrategy>(probe_pos, basis[0], target_pos);
      } else if (strategy_name == "probe-all") {
        strategy = std::make_unique<ProbeAllThenForgeStrategy>(
            bases_text == "xz" ? ProbeBases::XZ : ProbeBases::X_ONLY, budget);
      } else if (strategy_name == "random-pauli") {
        strategy = std::make_unique<RandomPauliStrategy>(weight);
      } else {
        if (on_accept.empty() || on_reject.empty()) {
          throw std::invalid_argument("custom strategy needs --on-accept and --on-reject");
        }
        std::vector<PauliOp> probes;
        for (const auto& s : script_probes) {
          probes.push_back(PauliOp::from_string(s));
        }
        strategy = std::make_unique<ScriptedStrategy>(std::move(probes), PauliOp::from_string(on_accept),
                                                      PauliOp::from_string(on_reject));
      }
      // Validate the strategy against this family before spending trials.
      Rng probe_rng(0);
      for (size_t i = 0; i < strategy->num_ciphertexts(total); ++i) {
        check_dims(strategy->attack(i, std::vector<bool>(i, true), total, probe_rng).num_qubits(), total, "strategy");
      }
      ReuseStats r = parallel_reuse(f, *strategy, trials, common_.seed, common_.shards);
      Outcome o;
      o.family = family_json(f);
      o.parameters = {{"strategy", r.strategy}, {"trials", trials}, {"epsilon_keys", epsilon_keys}};
      o.result = {{"strategy", r.strategy},
                  {"n_trials", r.n_trials},
                  {"ciphertexts_per_trial", strategy->num_ciphertexts(total)},
                  {"accepted_second", r.accepted_second},
                  {"forged_second", r.forged_second},
                  {"p_accept_second", r.p_accept_second},
                  {"p_forge_second", r.p_forge_second},
                  {"accept_ci", interval_json(r.accept_ci)},
                  {"forge_ci", interval_json(r.forge_ci)},
                  {"probes_accepted", r.probes_accepted},
                  {"probes_total", r.probes_total}};
      if (epsilon_keys > 0) {
        SweepConfig c;
        c.max_weight = 2;
        c.n_keys = epsilon_keys;
        c.seed = derive_seed(common_.seed, Stream::TRIAL, uint64_t{1} << 40);
        c.shards = common_.shards;
        SweepReport s = epsilon_sweep(f, c);
        double budget2 = 2.0 * s.max_spt.ci_high;
        o.result["epsilon_spt"] = estimate_json(s.max_spt);
        o.result["two_epsilon_budget"] = budget2;
        o.result["within_budget"] = r.p_forge_second <= budget2 + 3.0 * r.forge_ci.width();
      }
      return o;
    };
  });

  // selftest
  std::string fixture_path;
  auto* self = app.add_subcommand("selftest", "Fast invariant suite");
  add_common(self, common_);
  self->add_option("--fixture", fixture_path, "JSON fixture overriding built-in inputs, e.g. {\"steane_generator\": [...]}")
      ->check(CLI::ExistingFile);
  self->callback([&] {
    command = "selftest";
    action = [&] {
      SelftestFixture fixture;
      fixture.seed = common_.seed;
      if (!fixture_path.empty()) {
        std::ifstream in(fixture_path);
        json j = json::parse(in);
        if (j.contains("steane_generator")) {
          fixture.steane_generator = j.at("steane_generator").get<std::vector<std::string>>();
        }
      }
      SelftestSummary s = run_selftest(fixture);
      Outcome o;
      json checks = json::array();
      for (const auto& c : s.checks) {
        checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
      }
      o.parameters = {{"fixture", fixture_path.empty() ? json(nullptr) : json(fixture_path)}};
      o.result = {{"checks", checks}, {"passed", s.all_passed()}, {"failures", s.failures()}};
      if (!s.all_passed()) {
        o.status = "FAILED";
        o.exit_code = kExitGuard;
        for (const auto& c : s.checks) {
          if (!c.passed) {
            err_ << "selftest: " << c.name << " FAILED: " << c.detail << "\n";
          }
        }
      }
      return o;
    };
  });

  std::vector<std::string> expanded;
  try {
    expanded = expand_config(args);
  } catch (const std::exception& e) {
    err_ << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
  std::vector<const char*> argv;
  argv.reserve(expanded.size());
  for (const auto& a : expanded) {
    argv.push_back(a.c_str());
  }
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out_, err_);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    Outcome o = action();
    emit(command, o);
    return o.exit_code;
  } catch (const GuardError& e) {
    err_ << "refused: " << e.what() << "\n";
    Outcome o;
    o.status = "REFUSED";
    o.result = {{"guard", e.code()}, {"message", e.what()}};
    emit(command, o);
    return kExitGuard;
  } catch (const std::exception& e) {
    err_ << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Runner runner(out, err);
  return runner.run(args);
}

}  // namespace qauth::cli
