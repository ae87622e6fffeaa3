#include "lab.hpp"

#include "suites.hpp"

#include "mahler/body_io.hpp"
#include "mahler/capacity.hpp"
#include "mahler/crofton.hpp"
#include "mahler/embedding.hpp"
#include "mahler/symplectic.hpp"
#include "mahler/volume.hpp"

#include <CLI11.hpp>

#include <fcntl.h>
#include <unistd.h>

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <functional>
#include <numbers>
#include <optional>
#include <sstream>

#ifndef MAHLER_LAB_VERSION
#define MAHLER_LAB_VERSION "0.0.0"
#endif

namespace mahler::lab {

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kAssertion = 2;

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct Outcome {
  json parameters = json::object();
  json result;
  std::optional<std::string> body_hash;
  bool holds = true;
};

struct Common {
  std::optional<std::uint64_t> seed;
  std::string log;
  bool no_log = false;
  unsigned threads = 0;
};

std::uint64_t default_seed() {
  if (const char* s = std::getenv("MAHLER_LAB_SEED"); s && *s) {
    try {
      std::size_t pos = 0;
      const unsigned long long v = std::stoull(s, &pos);
      if (pos == std::string(s).size()) return v;
    } catch (const std::exception&) {
    }
    throw UsageError(std::string("MAHLER_LAB_SEED is not an unsigned integer: ") + s);
  }
  return 0;
}

std::string log_path(const Common& c) {
  if (!c.log.empty()) return c.log;
  if (const char* s = std::getenv("MAHLER_LAB_LOG"); s && *s) return s;
  return "experiments.jsonl";
}

std::string timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// One write(2) per record on an O_APPEND descriptor keeps concurrent
// appends from interleaving.
void append_record(const std::string& path, const json& record) {
  const std::string line = record.dump() + "\n";
  const int fd = ::open(path.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
  if (fd < 0) throw std::runtime_error("cannot open log " + path);
  const ssize_t n = ::write(fd, line.data(), line.size());
  ::close(fd);
  if (n != static_cast<ssize_t>(line.size())) throw std::runtime_error("short write to log " + path);
}

ConvexBody read_body(const std::string& arg, json& description) {
  ConvexBody k = arg.starts_with("{") ? parse_body_text(arg) : load_body(arg);
  description = k.description();
  return k;
}

QVector parse_normal(const std::string& text) {
  QVector u;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t"), e = item.find_last_not_of(" \t");
    if (b == std::string::npos) throw UsageError("empty entry in normal '" + text + "'");
    try {
      u.push_back(parse_rational(item.substr(b, e - b + 1)));
    } catch (const std::invalid_argument& ex) {
      throw UsageError(std::string("bad normal entry: ") + ex.what());
    }
  }
  if (u.empty()) throw UsageError("empty normal");
  return u;
}

json rationals(const QVector& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(to_string(x));
  return a;
}

json describe(const ConvexBody& k) {
  json j{{"dim", k.dim()}, {"body", k.description()}, {"hash", content_hash(k.description())}};
  if (const Polytope* p = k.polytope()) {
    j["vertices"] = p->vertices().rows();
    j["facets"] = p->facets().rows();
    if (k.dim() <= 8) j["volume"] = exact_polytope_volume(k).to_json();
  }
  return j;
}

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--seed", c.seed, "random seed (default: MAHLER_LAB_SEED or 0)");
  sub->add_option("--log", c.log, "experiment log (default: MAHLER_LAB_LOG or ./experiments.jsonl)");
  sub->add_flag("--no-log", c.no_log, "do not append to the experiment log");
  sub->add_option("--threads", c.threads, "worker threads (0: all cores)");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Mahler volume products, symplectic reductions and capacities"};
  app.require_subcommand(1, 1);
  app.set_version_flag("--version", MAHLER_LAB_VERSION);
  Common common;

  std::string body_arg;
  std::vector<std::string> normals;
  std::uint64_t samples = 1'000'000;
  std::string method = "auto";
  std::map<std::string, std::function<Outcome()>> handlers;
  auto seed = [&] { return common.seed ? *common.seed : default_seed(); };

  auto* volume_cmd = app.add_subcommand("volume", "volume of a body");
  volume_cmd->add_option("--body", body_arg, "body description (file or inline JSON)")->required();
  volume_cmd->add_option("--samples", samples, "Monte Carlo samples");
  volume_cmd->add_option("--method", method, "auto, exact or mc")->check(CLI::IsMember({"auto", "exact", "mc"}));
  add_common(volume_cmd, common);
  handlers["volume"] = [&] {
    Outcome o;
    json d;
    const ConvexBody k = read_body(body_arg, d);
    o.body_hash = content_hash(d);
    o.parameters = {{"body", d}, {"samples", samples}, {"method", method}};
    VolumeResult v;
    if (method == "exact")
      v = exact_polytope_volume(k);
    else if (method == "mc")
      v = mc_volume(k, samples, seed(), common.threads);
    else
      v = volume(k, {samples, seed(), common.threads});
    o.result = v.to_json();
    o.result["dim"] = k.dim();
    return o;
  };

  auto* mahler_cmd = app.add_subcommand("mahler", "volume product vol K * vol K-polar");
  mahler_cmd->add_option("--body", body_arg, "body description (file or inline JSON)")->required();
  mahler_cmd->add_option("--samples", samples, "Monte Carlo samples per volume");
  add_common(mahler_cmd, common);
  handlers["mahler"] = [&] {
    Outcome o;
    json d;
    const ConvexBody k = read_body(body_arg, d);
    o.body_hash = content_hash(d);
    o.parameters = {{"body", d}, {"samples", samples}};
    const MahlerReport m = mahler_product(k, {samples, seed(), common.threads});
    o.holds = m.exact_ratio ? *m.exact_ratio >= 1 : m.product >= to_double(m.bound) - 3 * m.ci_halfwidth;
    o.result = m.to_json();
    o.result["holds"] = o.holds;
    return o;
  };

  for (const char* name : {"section", "project"}) {
    auto* cmd = app.add_subcommand(name, std::string(name) == "section" ? "central hyperplane section"
                                                                        : "projection along a line");
    cmd->add_option("--body", body_arg, "body description (file or inline JSON)")->required();
    cmd->add_option("--normal", normals, "comma-separated rationals, e.g. 1,1,1")->required()->expected(1);
    add_common(cmd, common);
    handlers[name] = [&, name] {
      Outcome o;
      json d;
      const ConvexBody k = read_body(body_arg, d);
      o.body_hash = content_hash(d);
      const QVector u = parse_normal(normals.front());
      if (u.size() != k.dim()) throw UsageError("normal length does not match the body dimension");
      o.parameters = {{"body", d}, {"normal", rationals(u)}};
      o.result = describe(std::string(name) == "section" ? hyperplane_section(k, u) : hyperplane_projection(k, u));
      return o;
    };
  }

  auto* reduce_cmd = app.add_subcommand("reduce", "linear symplectic reduction of K x K-polar");
  reduce_cmd->add_option("--body", body_arg, "K, or a product description")->required();
  reduce_cmd->add_option("--normal", normals, "q-space normal; repeat to iterate")->required();
  add_common(reduce_cmd, common);
  handlers["reduce"] = [&] {
    Outcome o;
    json d;
    ConvexBody k = read_body(body_arg, d);
    o.body_hash = content_hash(d);
    if (d.value("type", "") == "product") k = parse_body(d.at("body"));
    std::vector<QVector> us;
    for (const auto& s : normals) us.push_back(parse_normal(s));
    json js = json::array();
    for (const auto& u : us) js.push_back(rationals(u));
    o.parameters = {{"body", d}, {"normals", js}};
    std::size_t n = k.dim();
    for (const auto& u : us) {
      if (u.size() != n) throw UsageError("normal length does not match the current dimension");
      if (n < 2) throw UsageError("cannot reduce a two-dimensional product further");
      --n;
    }
    const LagrangianProduct r = reduce_product(lagrangian_product(k), us);
    const ConvexBody s = r.body();
    o.result = {{"n", r.n()},
                {"dim", s.dim()},
                {"base", r.base.description()},
                {"dual", r.dual.description()},
                {"body", s.description()},
                {"hash", content_hash(s.description())}};
    if (r.base.is_exact() && r.dual.is_exact()) o.result["volume"] = to_string(exact_product_volume(r));
    return o;
  };

  CapacityConfig cap;
  bool symmetric = false;
  auto* cap_cmd = app.add_subcommand("capacity", "EHZ capacity estimate by Clarke's variational problem");
  cap_cmd->add_option("--body", body_arg, "body in R^{2n}, coordinates (p, q)")->required();
  cap_cmd->add_option("--points", cap.points, "polygon vertices m");
  cap_cmd->add_option("--starts", cap.starts, "random starts");
  cap_cmd->add_option("--iterations", cap.max_iterations, "iteration budget per start");
  cap_cmd->add_flag("--symmetric", symmetric, "optimise over centrally symmetric loops");
  add_common(cap_cmd, common);
  handlers["capacity"] = [&] {
    Outcome o;
    json d;
    const ConvexBody k = read_body(body_arg, d);
    o.body_hash = content_hash(d);
    if (k.dim() % 2 != 0) throw UsageError("capacity needs an even-dimensional body");
    cap.seed = seed();
    cap.threads = common.threads;
    o.parameters = {{"body", d},
                    {"points", cap.points},
                    {"starts", cap.starts},
                    {"iterations", cap.max_iterations},
                    {"symmetric", symmetric}};
    const CapacityEstimate e = symmetric ? symmetric_capacity_estimate(k, cap) : capacity_estimate(k, cap);
    o.result = e.to_json(true);
    return o;
  };

  double epsilon = 0.0, radius = 1.0;
  std::string g_text;
  std::uint64_t crofton_samples = 100'000;
  auto* crofton_cmd = app.add_subcommand("crofton", "Crofton identity for H = p1 + epsilon g in C^2");
  crofton_cmd->add_option("--epsilon", epsilon, "perturbation size");
  crofton_cmd->add_option("--g", g_text, "odd polynomial in p1 p2 q1 q2, independent of p1");
  crofton_cmd->add_option("--samples", crofton_samples, "Hopf circles");
  crofton_cmd->add_option("--radius", radius, "sphere radius");
  add_common(crofton_cmd, common);
  handlers["crofton"] = [&] {
    Outcome o;
    o.parameters = {{"epsilon", epsilon}, {"g", g_text}, {"samples", crofton_samples}, {"radius", radius}};
    if (epsilon != 0.0 && g_text.empty()) throw UsageError("--epsilon needs --g");
    const OddHamiltonian h = g_text.empty() ? OddHamiltonian::linear(2)
                                            : OddHamiltonian(2, epsilon, Polynomial::parse(g_text, 2));
    const CroftonReport r = crofton_check(h, radius, crofton_samples, seed());
    o.holds = r.agrees();
    o.result = r.to_json();
    o.result["agrees"] = o.holds;
    return o;
  };

  double alpha = 2.0, radius_factor = 1.0;
  unsigned nexp = 8;
  std::size_t copies = 2, grid = 4096;
  std::string cache_dir;
  auto* embed_cmd = app.add_subcommand("embed", "ball embedding into the l_alpha x l_beta product");
  embed_cmd->add_option("--alpha", alpha, "alpha > 1 (beta is conjugate)");
  embed_cmd->add_option("--nexp", nexp, "profile exponent N (0: limit profile)");
  embed_cmd->add_option("--copies", copies, "number of planar factors");
  embed_cmd->add_option("--radius-factor", radius_factor, "multiple of the certified radius");
  embed_cmd->add_option("--samples", samples, "sampled ball points");
  embed_cmd->add_option("--grid", grid, "profile table size");
  embed_cmd->add_option("--cache", cache_dir, "directory for profile tables");
  add_common(embed_cmd, common);
  handlers["embed"] = [&] {
    Outcome o;
    o.parameters = {{"alpha", alpha},     {"nexp", nexp}, {"copies", copies}, {"radius_factor", radius_factor},
                    {"samples", samples}, {"grid", grid}};
    if (!(alpha > 1.0)) throw UsageError("--alpha must exceed 1");
    if (copies == 0) throw UsageError("--copies must be positive");
    const EmbeddingProfile pr = cache_dir.empty() ? build_profile(alpha, nexp, grid)
                                                  : cached_profile(alpha, nexp, cache_dir, grid);
    const double eps = eps_rect_check(pr, std::sqrt(4 / std::numbers::pi));
    const double certified = std::sqrt(std::max(0.0, (4 / std::numbers::pi) * (1 - copies * eps)));
    const EmbeddingReport r = product_embedding_check(pr, copies, radius_factor * certified, samples, seed());
    o.holds = radius_factor > 1.0 || r.contained == r.samples;
    o.result = r.to_json();
    o.result["c_N"] = pr.c_n;
    o.result["radius_factor"] = radius_factor;
    return o;
  };

  std::string suite;
  SuiteParams sp;
  std::size_t suite_n = 0, suite_trials = 0;
  std::uint64_t suite_samples = 0;
  auto* verify_cmd = app.add_subcommand("verify", "run an acceptance battery");
  verify_cmd->add_option("--suite", suite, "suite name")->required()->check(CLI::IsMember(suite_names()));
  auto* n_opt = verify_cmd->add_option("--n", suite_n, "dimension (or copies for embedding)");
  auto* trials_opt = verify_cmd->add_option("--trials", suite_trials, "random cases");
  auto* samples_opt = verify_cmd->add_option("--samples", suite_samples, "Monte Carlo samples");
  verify_cmd->add_option("--p", sp.p, "exponents for sections-lp")->delimiter(',');
  verify_cmd->add_option("--alpha", sp.alpha, "exponents for embedding")->delimiter(',');
  verify_cmd->add_option("--action", sp.action, "the constant A for reduction-bound");
  add_common(verify_cmd, common);
  handlers["verify"] = [&] {
    Outcome o;
    if (*n_opt) sp.n = suite_n;
    if (*trials_opt) sp.trials = suite_trials;
    if (*samples_opt) sp.samples = suite_samples;
    sp.seed = seed();
    sp.threads = common.threads;
    o.parameters = {{"suite", suite}, {"action", sp.action}};
    if (sp.n) o.parameters["n"] = *sp.n;
    if (sp.trials) o.parameters["trials"] = *sp.trials;
    if (sp.samples) o.parameters["samples"] = *sp.samples;
    if (!sp.p.empty()) o.parameters["p"] = sp.p;
    if (!sp.alpha.empty()) o.parameters["alpha"] = sp.alpha;
    const SuiteResult r = run_suite(suite, sp);
    o.holds = r.ok();
    o.result = r.to_json();
    return o;
  };

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  json record;
  try {
    Outcome o = handlers.at(command)();
    record = {{"version", MAHLER_LAB_VERSION},
              {"command", command},
              {"body_hash", o.body_hash ? json(*o.body_hash) : json(nullptr)},
              {"parameters", o.parameters},
              {"seed", seed()},
              {"result", o.result},
              {"status", o.holds ? "ok" : "assertion-failed"},
              {"timestamp", timestamp()}};
    out << record.dump(2) << '\n';
    if (!common.no_log) append_record(log_path(common), record);
    return o.holds ? kOk : kAssertion;
  } catch (const std::exception& e) {
    // Invalid bodies, normals and parameters surface as exceptions.
    err << "mahler_lab " << command << ": " << e.what() << '\n';
    return kUsage;
  }
}

}  // namespace mahler::lab
