// cantor: command-line front end over the library.
//
// Every command prints one JSON envelope {op, input_hash, result, certificate}.
// Exit status: 0 ok, 1 negative verdict, 2 invalid input, 3 I/O failure.

#include "cantor/composite.hpp"
#include "cantor/cycles.hpp"
#include "cantor/error.hpp"
#include "cantor/io.hpp"
#include "cantor/matrices.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

namespace fs = std::filesystem;
using namespace cantor;
using io::Json;

namespace {

enum Exit { ok = 0, negative = 1, invalid = 2, io_failure = 3 };

struct IoFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string descriptor, snapshot, matrix, prefix, input, spec, targets, out;
  std::size_t budget = 0;
  std::size_t depth = 2;
  std::size_t effort = 1'000'000;
  std::size_t samples = 32;
  std::string format = "json";
  bool pairs = false;
};

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoFailure("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& path, const std::string& bytes) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out || !(out << bytes) || !out.flush()) throw IoFailure("cannot write " + path.string());
}

/// Root from CANTOR_WORKSPACE: descriptors/, snapshots/ and runlog.jsonl.
struct Workspace {
  std::optional<fs::path> root;

  static Workspace from_env() {
    const char* env = std::getenv("CANTOR_WORKSPACE");
    return Workspace{env && *env ? std::optional<fs::path>(env) : std::nullopt};
  }

  /// The path itself if it exists, else a file of that name under root/kind.
  fs::path resolve(const std::string& name, const char* kind) const {
    if (fs::exists(name) || !root) return name;
    for (const fs::path& candidate : {*root / kind / name, *root / kind / (name + ".json")}) {
      if (fs::exists(candidate)) return candidate;
    }
    return name;
  }

  void log(const std::string& op, const std::string& hash, int status) const {
    if (!root) return;
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &tm);
    const Json entry = {{"time", stamp}, {"op", op}, {"input_hash", hash}, {"exit", status}};
    std::error_code ec;
    fs::create_directories(*root, ec);
    std::ofstream out(*root / "runlog.jsonl", std::ios::app);
    out << entry.dump() << "\n";
  }
};

/// One command invocation: its parsed inputs (hashed) and its outcome.
struct Run {
  Run(std::string op, const Workspace& ws) : op(std::move(op)), ws(ws) {}

  std::string op;
  const Workspace& ws;
  Json params = Json::object();
  Json inputs = Json::object();
  Json result;
  Json certificate;
  int status = ok;

  Json load(const std::string& key, const std::string& name, const char* kind) {
    if (name.empty()) throw Error(ErrorCode::InvalidInput, "--" + key + " is required");
    Json j = io::parse(read_file(ws.resolve(name, kind)));
    inputs[key] = j;
    return j;
  }

  std::string hash() const {
    return io::fnv1a_hex(io::canonical({{"op", op}, {"params", params}, {"inputs", inputs}}));
  }

  /// Writes `artifact` to `out`, to the workspace, or embeds it in the result.
  void emit(const char* field, const Json& artifact, const std::string& out, const char* kind) {
    fs::path path = out;
    if (path.empty() && ws.root) path = *ws.root / kind / (hash() + ".json");
    if (path.empty()) {
      result[field] = artifact;
      return;
    }
    write_file(path, io::canonical(artifact));
    result[std::string(field) + "_path"] = path.string();
  }
};

GroupDescriptor descriptor_or_rationals(const Json& j) {
  return j.contains("descriptor") ? io::descriptor_from_json(j["descriptor"])
                                  : GroupDescriptor(RationalGroup::rationals());
}

Json ledger_summary(const GoodMeasureChain& chain) {
  std::size_t objects = 0;
  for (const auto& e : chain.ledger()) objects += e.kind == LedgerEntry::Kind::object;
  return {{"objects", objects}, {"morphisms", chain.ledger().size() - objects}};
}

Json chain_summary(const GoodMeasureChain& chain) {
  Json cells = Json::array();
  for (const auto& P : chain.levels()) cells.push_back(P.size());
  return {{"levels", chain.size()},
          {"cells", std::move(cells)},
          {"ledger", ledger_summary(chain)},
          {"schedule_height", chain.schedule_height()}};
}

Json to_json(const ClopenSet& U) {
  return {{"level", U.level}, {"cells", Json(std::vector<CellId>(U.cells.begin(), U.cells.end()))}};
}

// ---------------------------------------------------------------------------

void build_chain(Run& run, const Options& o) {
  if (o.budget == 0) throw Error(ErrorCode::InvalidInput, "--budget must be at least 1");
  run.params["budget"] = o.budget;
  GoodMeasureChain chain = [&] {
    if (!o.snapshot.empty()) return io::chain_from_json(run.load("snapshot", o.snapshot, "snapshots"));
    return new_chain(io::descriptor_from_json(run.load("descriptor", o.descriptor, "descriptors")));
  }();
  run_schedule(chain, o.budget);
  run.result = chain_summary(chain);
  run.emit("snapshot", io::to_json(chain), o.out, "snapshots");
}

// Subset witnesses for every pair of unions of cells at one level (all of
// them up to 8 cells, 4096 seeded samples above), then maximal partitions
// for a run of enumerated target tuples.
void check_good(Run& run, const Options& o) {
  run.params["depth"] = o.depth;
  GoodMeasureChain chain = io::chain_from_json(run.load("snapshot", o.snapshot, "snapshots"));
  const bool extended = chain.top() < o.depth;
  ensure_depth(chain, o.depth);
  const std::size_t level = o.depth;
  // Copied: witnesses may append levels.
  const auto cells = chain.level(level).cells();

  std::vector<std::pair<ClopenSet, ClopenSet>> pairs;
  const bool exhaustive = cells.size() <= 8;
  auto subset = [&](std::uint64_t mask) {
    ClopenSet U{level, {}};
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (mask >> i & 1) U.cells.insert(cells[i].id);
    }
    return U;
  };
  if (exhaustive) {
    const std::uint64_t n = std::uint64_t{1} << cells.size();
    for (std::uint64_t a = 0; a < n; ++a) {
      for (std::uint64_t b = 0; b < n; ++b) pairs.push_back({subset(a), subset(b)});
    }
  } else {
    std::mt19937_64 rng(0x5eed);
    std::bernoulli_distribution coin(0.5);
    for (int k = 0; k < 4096; ++k) {
      ClopenSet U{level, {}}, W{level, {}};
      for (const auto& c : cells) {
        if (coin(rng)) U.cells.insert(c.id);
        if (coin(rng)) W.cells.insert(c.id);
      }
      pairs.push_back({std::move(U), std::move(W)});
    }
  }

  std::size_t checked = 0, passed = 0;
  Json failures = Json::array(), records = Json::array();
  for (const auto& [U, W] : pairs) {
    const ExactValue mu = measure(chain, U);
    if (!(mu < measure(chain, W))) continue;
    ++checked;
    const ClopenSet Wp = subset_witness(chain, U, W);
    const std::size_t deep = std::max(Wp.level, W.level);
    const auto inner = lift_set(chain, Wp, deep).cells;
    const auto outer = lift_set(chain, W, deep).cells;
    const bool pass = measure(chain, Wp) == mu &&
                      std::includes(outer.begin(), outer.end(), inner.begin(), inner.end());
    passed += pass;
    Json record = {{"U", to_json(U)}, {"W", to_json(W)}, {"pass", pass}};
    if (!pass) failures.push_back(record);
    if (o.pairs) records.push_back(std::move(record));
  }

  // Targets: (v, 1 - v) and (v, w, 1 - v - w) over small elements of V.
  const auto values = enumerate(chain.V(), 8);
  std::vector<std::vector<ExactValue>> tuples;
  for (std::size_t i = 0; i < values.size() && tuples.size() < 20; ++i) {
    const ExactValue rest = ExactValue(1) - values[i];
    if (rest.sign() > 0 && member(rest, chain.V())) tuples.push_back({values[i], rest});
    for (std::size_t j = i; j < values.size() && tuples.size() < 20; ++j) {
      const ExactValue last = rest - values[j];
      if (last.sign() > 0 && member(last, chain.V())) tuples.push_back({values[i], values[j], last});
    }
  }
  std::size_t realized = 0;
  Json partition_failures = Json::array();
  for (const auto& targets : tuples) {
    const std::size_t stage = maximal_partition_witness(chain, targets);
    const auto& lift =
        chain.find_ledger(object_key(WeightedPartition::from_weights("m", targets)))->lift;
    std::vector<ExactValue> got(targets.size());
    for (const auto& [cell, image] : lift) {
      got[std::stoul(image.substr(image.rfind('/') + 1))] += chain.level(stage).weight(cell);
    }
    if (got == targets) {
      ++realized;
    } else {
      Json t = Json::array();
      for (const auto& v : targets) t.push_back(io::to_json(v));
      partition_failures.push_back(std::move(t));
    }
  }

  run.result = {{"level", level},
                {"cells", cells.size()},
                {"extended", extended},
                {"mode", exhaustive ? "exhaustive" : "sampled"},
                {"pairs_checked", checked},
                {"pairs_passed", passed},
                {"partitions_checked", tuples.size()},
                {"partitions_passed", realized}};
  if (o.pairs) run.result["pairs"] = std::move(records);
  if (!failures.empty() || !partition_failures.empty()) {
    run.status = negative;
    run.certificate = {{"pair_failures", failures}, {"partition_failures", partition_failures}};
  }
  if (!o.out.empty()) run.emit("snapshot", io::to_json(chain), o.out, "snapshots");
}

void decide_rokhlin(Run& run, const Options& o) {
  const auto V = io::descriptor_from_json(run.load("descriptor", o.descriptor, "descriptors"));
  const RokhlinVerdict r = rokhlin_decide(V);
  run.result = io::to_json(r);
  if (r.rokhlin == Tri::no) {
    run.status = negative;
    std::size_t samples = o.samples;
    if (r.certificate == RokhlinVerdict::Certificate::prime_exponent) {
      std::uint64_t q = 1;
      for (unsigned i = 0; i < r.exponent && q <= 1'000'000; ++i) q *= r.prime;
      samples = std::max<std::size_t>(samples, q);
    }
    run.params["samples"] = samples;
    const auto violations = divisibility_closure_check(V, samples);
    run.certificate = {{"prime", r.prime}, {"exponent", r.exponent}};
    if (!violations.empty()) run.certificate["closure_violation"] = io::to_json(violations.front());
  } else if (r.rokhlin == Tri::yes) {
    run.certificate = {{"kind", std::string(to_string(r.certificate))}};
  }
}

void check_closure(Run& run, const Options& o) {
  run.params["samples"] = o.samples;
  const auto V = io::descriptor_from_json(run.load("descriptor", o.descriptor, "descriptors"));
  Json violations = Json::array();
  for (const auto& v : divisibility_closure_check(V, o.samples)) violations.push_back(io::to_json(v));
  run.result = {{"samples", o.samples}, {"closed", violations.empty()}};
  if (!violations.empty()) {
    run.status = negative;
    run.certificate = {{"violations", std::move(violations)}};
  }
}

io::Symbols optional_symbols(Run& run, const Options& o) {
  if (o.descriptor.empty()) return {};
  return io::descriptor_from_json(run.load("descriptor", o.descriptor, "descriptors")).symbols();
}

void decompose(Run& run, const Options& o) {
  const auto symbols = optional_symbols(run, o);
  const auto A = io::matrix_from_json(run.load("matrix", o.matrix, "matrices"), symbols);
  const auto cycles = cycle_decompose(A.entries);
  run.result = {{"count", cycles.size()}, {"cycles", io::to_json(cycles)}};
}

GoodMeasureChain load_chain(Run& run, const Options& o) {
  return io::chain_from_json(run.load("snapshot", o.snapshot, "snapshots"));
}

BalancedMatrix load_valid_matrix(Run& run, const Options& o, const GoodMeasureChain& chain) {
  const auto A = io::matrix_from_json(run.load("matrix", o.matrix, "matrices"), chain.V().symbols());
  if (A.level > chain.top() || !validate(A, chain)) {
    throw Error(ErrorCode::InvalidInput, "matrix is not balanced over level " +
                                             std::to_string(A.level) + " of the chain");
  }
  return A;
}

void witness(Run& run, const Options& o) {
  auto chain = load_chain(run, o);
  const auto A = load_valid_matrix(run, o, chain);
  const auto sigma = compatible_witness(chain, A);
  run.result = {{"prefix", io::to_json(sigma)}, {"compatible", compatible(chain, sigma, A)}};
  if (!run.result["compatible"].get<bool>()) run.status = negative;
  if (!o.out.empty()) run.emit("snapshot", io::to_json(chain), o.out, "snapshots");
}

void check_compat(Run& run, const Options& o) {
  const auto chain = load_chain(run, o);
  const auto A = load_valid_matrix(run, o, chain);
  const auto sigma = io::prefix_from_json(run.load("prefix", o.prefix, "prefixes"));
  if (!verify_prefix(chain, sigma)) throw Error(ErrorCode::InvalidInput, "prefix does not verify");
  const bool yes = compatible(chain, sigma, A);
  run.result = {{"compatible", yes}};
  if (!yes) {
    run.status = negative;
    run.certificate = {{"transport", io::to_json(BalancedMatrix{
                                         A.level, transport_masses(chain, sigma, A.level)})}};
  }
}

void amalgamate_tuples(Run& run, const Options& o) {
  const Json j = run.load("input", o.input, "inputs");
  const auto V = descriptor_or_rationals(j);
  const auto s = V.symbols();
  const auto C = qlike_amalgamate(io::tuple_from_json(io::field(j, "B0"), s),
                                  io::tuple_morphism_from_json(io::field(j, "p0")),
                                  io::tuple_from_json(io::field(j, "B1"), s),
                                  io::tuple_morphism_from_json(io::field(j, "p1")),
                                  io::tuple_from_json(io::field(j, "A"), s), V);
  run.result = {{"C", io::to_json(C.C)}, {"q0", io::to_json(C.q0)}, {"q1", io::to_json(C.q1)}};
}

void product_lift(Run& run, const Options& o) {
  const Json j = run.load("input", o.input, "inputs");
  const auto V = descriptor_or_rationals(j);
  const auto s = V.symbols();
  const auto L = ring_product_lift(io::tuple_from_json(io::field(j, "c"), s),
                                   io::tuple_from_json(io::field(j, "d"), s), V);
  run.result = {{"u", io::to_json(L.u)},
                {"onto_c", io::to_json(L.onto_c)},
                {"onto_d", io::to_json(L.onto_d)}};
}

void find_morphism(Run& run, const Options& o) {
  run.params["effort"] = o.effort;
  const Json j = run.load("input", o.input, "inputs");
  const auto s = descriptor_or_rationals(j).symbols();
  const auto found = find_tuple_morphism(io::tuple_from_json(io::field(j, "source"), s),
                                         io::tuple_from_json(io::field(j, "target"), s), o.effort);
  run.result = {{"found", found.morphism.has_value()},
                {"exhausted", found.exhausted},
                {"nodes", found.nodes}};
  if (found.morphism) {
    run.result["morphism"] = io::to_json(*found.morphism);
  } else {
    run.status = negative;
  }
}

// Composite artifacts: a build spec {"components": [{"descriptor", "scale",
// "budget"}]} or a snapshot {"components": [{"scale", "chain"}]}.
CompositeMeasure composite_from_json(const Json& j) {
  std::vector<Component> parts;
  for (const auto& c : io::field(j, "components")) {
    const Rational scale = io::rational_from_json(io::field(c, "scale"));
    if (c.contains("chain")) {
      parts.push_back({io::chain_from_json(c["chain"]), scale});
      continue;
    }
    auto chain = new_chain(io::descriptor_from_json(io::field(c, "descriptor")));
    const Json& b = io::field(c, "budget");
    if (!b.is_number_unsigned() || b.get<std::size_t>() == 0) {
      throw Error(ErrorCode::InvalidInput, "component budget must be a positive integer");
    }
    run_schedule(chain, b.get<std::size_t>());
    parts.push_back({std::move(chain), scale});
  }
  return weighted_sum(std::move(parts));
}

Json to_json(const CompositeMeasure& m) {
  Json components = Json::array();
  for (const auto& c : m.components()) {
    components.push_back({{"scale", io::to_json(c.scale)}, {"chain", io::to_json(c.chain)}});
  }
  return {{"components", std::move(components)}};
}

void composite_build(Run& run, const Options& o) {
  const auto m = composite_from_json(run.load("spec", o.spec, "specs"));
  Json components = Json::array();
  for (const auto& c : m.components()) {
    Json s = chain_summary(c.chain);
    s["scale"] = io::to_json(c.scale);
    components.push_back(std::move(s));
  }
  run.result = {{"components", std::move(components)}};
  run.emit("composite", to_json(m), o.out, "snapshots");
}

std::vector<ExactValue> parse_targets(const std::string& text, const io::Symbols& symbols) {
  std::vector<ExactValue> out;
  if (!text.empty() && text.front() == '[') {
    for (const auto& v : io::parse(text)) out.push_back(io::value_from_json(v, symbols));
    return out;
  }
  std::stringstream in(text);
  for (std::string item; std::getline(in, item, ',');) out.push_back(parse_rational(item));
  return out;
}

void composite_refute(Run& run, const Options& o) {
  auto m = composite_from_json(run.load("spec", o.spec, "specs"));
  io::Symbols symbols;
  for (const auto& c : m.components()) symbols.merge(c.chain.V().symbols());
  const auto targets = parse_targets(o.targets, symbols);
  Json tj = Json::array();
  for (const auto& t : targets) tj.push_back(io::to_json(t));
  run.params["targets"] = tj;

  const auto r = maximality_refute(m, targets);
  run.result = {{"feasible", r.feasible}};
  if (r.feasible) {
    Json contributions = Json::array(), partition = Json::array();
    for (std::size_t t = 0; t < targets.size(); ++t) {
      Json row = Json::array(), sets = Json::array();
      for (const auto& v : r.contributions[t]) row.push_back(io::to_json(v));
      for (const auto& U : r.partition[t]) sets.push_back(to_json(U));
      contributions.push_back(std::move(row));
      partition.push_back(std::move(sets));
    }
    run.result["contributions"] = std::move(contributions);
    run.result["partition"] = std::move(partition);
    return;
  }
  run.status = negative;
  const auto& cert = *r.certificate;
  Json per_target = Json::array();
  for (std::size_t t = 0; t < cert.coefficients.size(); ++t) {
    Json coeffs = Json::object(), options = Json::array();
    for (const auto& [name, c] : cert.coefficients[t]) coeffs[name] = io::to_json(c);
    for (const auto& v : cert.options[t]) options.push_back(io::to_json(v));
    per_target.push_back({{"coefficients", std::move(coeffs)}, {"options", std::move(options)}});
  }
  run.certificate = {{"component", cert.component},
                     {"required", io::to_json(cert.required)},
                     {"targets", std::move(per_target)}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact constructions on clopen partitions of the Cantor space"};
  app.require_subcommand(1);
  Options o;
  const Workspace ws = Workspace::from_env();

  using Handler = void (*)(Run&, const Options&);
  std::vector<std::pair<CLI::App*, std::pair<std::string, Handler>>> commands;
  auto add = [&](CLI::App* parent, const std::string& name, const std::string& op,
                 const std::string& help, Handler h) {
    CLI::App* sub = parent->add_subcommand(name, help);
    sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json"}));
    commands.push_back({sub, {op, h}});
    return sub;
  };

  auto* build = add(&app, "build-chain", "build-chain", "Run the absorption schedule", build_chain);
  build->add_option("--descriptor", o.descriptor, "Value set descriptor");
  build->add_option("--snapshot", o.snapshot, "Resume from a chain snapshot");
  build->add_option("--budget", o.budget, "Schedule height bound")->required();
  build->add_option("--out", o.out, "Snapshot output path");

  auto* good = add(&app, "check-good", "check-good", "Subset witness sweep", check_good);
  good->add_option("--snapshot", o.snapshot, "Chain snapshot")->required();
  good->add_option("--depth", o.depth, "Level to sweep");
  good->add_option("--out", o.out, "Write the extended snapshot");
  good->add_flag("--pairs", o.pairs, "List every pair in the report");

  auto* decide = add(&app, "decide-rokhlin", "decide-rokhlin", "Rokhlin verdict", decide_rokhlin);
  decide->add_option("--descriptor", o.descriptor, "Value set descriptor")->required();
  decide->add_option("--samples", o.samples, "Closure check range");

  auto* closure = add(&app, "check-closure", "check-closure", "Divisibility closure", check_closure);
  closure->add_option("--descriptor", o.descriptor, "Value set descriptor")->required();
  closure->add_option("--samples", o.samples, "Check n, m up to this bound");

  auto* dec = add(&app, "decompose", "decompose", "Cycle decomposition", decompose);
  dec->add_option("--matrix", o.matrix, "Matrix file")->required();
  dec->add_option("--descriptor", o.descriptor, "Descriptor declaring the symbols");

  auto* wit = add(&app, "witness", "witness", "Automorphism compatible with a matrix", witness);
  wit->add_option("--matrix", o.matrix, "Matrix file")->required();
  wit->add_option("--snapshot", o.snapshot, "Chain snapshot")->required();
  wit->add_option("--out", o.out, "Write the extended snapshot");

  auto* compat = add(&app, "check-compat", "check-compat", "Prefix against a matrix", check_compat);
  compat->add_option("--matrix", o.matrix, "Matrix file")->required();
  compat->add_option("--snapshot", o.snapshot, "Chain snapshot")->required();
  compat->add_option("--prefix", o.prefix, "Automorphism prefix file")->required();

  auto* amal = add(&app, "amalgamate-tuples", "amalgamate-tuples", "Amalgamate a cospan of tuples",
                   amalgamate_tuples);
  amal->add_option("--input", o.input, "{descriptor, A, B0, p0, B1, p1}")->required();

  auto* prod = add(&app, "product-lift", "product-lift", "Common lift of two tuples", product_lift);
  prod->add_option("--input", o.input, "{descriptor, c, d}")->required();

  auto* find = add(&app, "find-tuple-morphism", "find-tuple-morphism", "Search for a tuple morphism",
                   find_morphism);
  find->add_option("--input", o.input, "{descriptor, source, target}")->required();
  find->add_option("--effort", o.effort, "Node budget");

  CLI::App* composite = app.add_subcommand("composite", "Composite measures");
  composite->require_subcommand(1);
  auto* cbuild = add(composite, "build", "composite build", "Build every component", composite_build);
  cbuild->add_option("--spec", o.spec, "Composite spec")->required();
  cbuild->add_option("--out", o.out, "Composite snapshot output path");
  auto* refute = add(composite, "refute-maximality", "composite refute-maximality",
                     "Realize or refute a clopen partition", composite_refute);
  refute->add_option("--spec", o.spec, "Composite spec or snapshot")->required();
  refute->add_option("--targets", o.targets, "Comma-separated rationals or a JSON array")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return invalid;
  }

  for (const auto& [sub, cmd] : commands) {
    if (!sub->parsed()) continue;
    Run run(cmd.first, ws);
    try {
      cmd.second(run, o);
    } catch (const IoFailure& e) {
      std::cerr << "error: " << e.what() << "\n";
      ws.log(run.op, run.hash(), io_failure);
      return io_failure;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      ws.log(run.op, run.hash(), invalid);
      return invalid;
    }
    const std::string hash = run.hash();
    std::cout << io::canonical({{"op", run.op},
                                {"input_hash", hash},
                                {"result", run.result},
                                {"certificate", run.certificate}});
    ws.log(run.op, hash, run.status);
    return run.status;
  }
  return invalid;
}
