#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace plab::app {

namespace {

namespace fs = std::filesystem;

class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(where() + ": expected an object");
  }

  std::string where() const { return path_.empty() ? "/" : path_; }
  std::string key_path(const std::string& key) const { return path_ + "/" + key; }

  bool has(const std::string& key) {
    seen_.insert(key);
    return j_.contains(key) && !j_.at(key).is_null();
  }

  const json& raw(const std::string& key) {
    seen_.insert(key);
    return j_.at(key);
  }

  Section child(const std::string& key) {
    static const json empty = json::object();
    return has(key) ? Section(j_.at(key), key_path(key)) : Section(empty, key_path(key));
  }

  double number(const std::string& key, double fallback) {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_number()) throw ConfigError(key_path(key) + ": expected a number");
    return v.get<double>();
  }

  std::optional<double> optional_number(const std::string& key) {
    if (!has(key)) return std::nullopt;
    return number(key, 0.0);
  }

  long long integer(const std::string& key, long long fallback) {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_number_integer()) throw ConfigError(key_path(key) + ": expected an integer");
    return v.get<long long>();
  }

  bool boolean(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_boolean()) throw ConfigError(key_path(key) + ": expected true or false");
    return v.get<bool>();
  }

  std::string string(const std::string& key, const std::string& fallback) {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_string()) throw ConfigError(key_path(key) + ": expected a string");
    return v.get<std::string>();
  }

  std::vector<double> numbers(const std::string& key, std::vector<double> fallback) {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_array()) throw ConfigError(key_path(key) + ": expected an array of numbers");
    std::vector<double> out;
    for (const auto& e : v) {
      if (!e.is_number()) throw ConfigError(key_path(key) + ": expected an array of numbers");
      out.push_back(e.get<double>());
    }
    return out;
  }

  /// Rejects keys nobody asked for (usually typos).
  void finish() const {
    for (const auto& [key, value] : j_.items())
      if (!seen_.count(key)) throw ConfigError(key_path(key) + ": unknown setting");
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

void require(bool ok, const std::string& where, const std::string& what) {
  if (!ok) throw ConfigError(where + ": " + what);
}

std::size_t line_of(std::string_view text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

LatticeVector named_profile(const std::string& name, Section& s, int n) {
  LatticeVector v(n);
  const double amplitude = s.number("amplitude", 1.0);
  if (name == "zero") return v;
  if (name == "gaussian-bump") {
    const double center = s.number("center", 0.0);
    const double width = s.number("width", 2.0);
    require(width > 0.0, s.where(), "width must be > 0");
    for (int i = -n; i <= n; ++i) v[i] = amplitude * std::exp(-0.5 * (i - center) * (i - center) / (width * width));
    return v;
  }
  if (name == "geometric-decay") {
    const double ratio = s.number("ratio", 0.5);
    require(ratio > 0.0 && ratio < 1.0, s.where(), "ratio must lie in (0, 1)");
    for (int i = -n; i <= n; ++i) v[i] = amplitude * std::pow(ratio, std::abs(i));
    return v;
  }
  if (name == "box") {
    const double center = s.number("center", 0.0);
    const double radius = s.number("radius", 5.0);
    require(radius >= 0.0, s.where(), "radius must be >= 0");
    for (int i = -n; i <= n; ++i) v[i] = std::abs(i - center) <= radius ? amplitude : 0.0;
    return v;
  }
  if (name == "unit") {
    const auto site = s.integer("site", 0);
    require(std::abs(site) <= n, s.where(), "site outside [-N, N]");
    v[static_cast<int>(site)] = amplitude;
    return v;
  }
  throw ConfigError(s.where() + ": unknown profile '" + name +
                    "' (known: zero, gaussian-bump, geometric-decay, box, unit)");
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

LatticeVector from_csv_file(const std::string& file, int n, const fs::path& base, const std::string& where) {
  const fs::path p = fs::path(file).is_absolute() ? fs::path(file) : base / file;
  std::string text;
  try {
    text = io::read_text(p);
  } catch (const Error& e) {
    throw ConfigError(where + ": " + e.what());
  }
  try {
    return io::lattice_from_csv(text, n);
  } catch (const DomainError& e) {
    throw ConfigError(where + " (" + p.string() + "): " + e.what());
  }
}

PhiSpec parse_phi(const json& spec, double p) {
  if (spec.is_null()) return PhiSpec::power_law(p);
  Section s(spec, "/model/phi");
  const std::string kind = s.string("kind", "power_law");
  PhiSpec phi;
  if (kind == "power_law") {
    phi = PhiSpec::power_law(p);
  } else if (kind == "table") {
    require(s.has("points"), s.where(), "table needs points [[u, phi], ...]");
    std::vector<std::pair<double, double>> pts;
    for (const auto& e : s.raw("points")) {
      require(e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number(), s.key_path("points"),
              "each point must be [u, phi]");
      pts.emplace_back(e[0].get<double>(), e[1].get<double>());
    }
    phi = PhiSpec::user_table(std::move(pts), p);
  } else {
    throw ConfigError(s.key_path("kind") + ": expected power_law or table");
  }
  s.finish();
  try {
    phi.validate();
  } catch (const DomainError& e) {
    throw ConfigError(s.where() + ": " + e.what());
  }
  return phi;
}

}  // namespace

LatticeVector resolve_profile(const json& spec, int half_width, const fs::path& base_dir, const std::string& where) {
  const int n = half_width;
  if (spec.is_array()) {
    std::vector<double> values;
    for (const auto& e : spec) {
      require(e.is_number(), where, "inline profile must be an array of numbers");
      values.push_back(e.get<double>());
    }
    require(values.size() == static_cast<std::size_t>(2 * n + 1), where,
            "inline profile needs 2N+1 = " + std::to_string(2 * n + 1) + " values");
    return LatticeVector(n, std::move(values));
  }
  if (spec.is_string()) {
    const std::string name = spec.get<std::string>();
    if (ends_with(name, ".csv")) return from_csv_file(name, n, base_dir, where);
    static const json empty = json::object();
    Section s(empty, where);
    return named_profile(name, s, n);
  }
  Section s(spec, where);
  LatticeVector v;
  if (s.has("values")) {
    v = resolve_profile(s.raw("values"), n, base_dir, s.key_path("values"));
  } else if (s.has("csv")) {
    v = from_csv_file(s.string("csv", ""), n, base_dir, s.key_path("csv"));
  } else {
    require(s.has("profile"), where, "expected values, csv or profile");
    v = named_profile(s.string("profile", ""), s, n);
  }
  s.finish();
  return v;
}

ExperimentConfig parse_config(std::string_view text, const fs::path& base_dir) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ConfigError("config line " + std::to_string(line_of(text, e.byte == 0 ? 0 : e.byte - 1)) + ": " + e.what());
  }
  if (root.is_null()) root = json::object();

  ExperimentConfig c;
  Section top(root, "");

  Section model = top.child("model");
  const double lambda = model.number("lambda", 1.0);
  const double p = model.number("p", 2.0);
  const double alpha = model.number("alpha", 0.5);
  const auto n = model.integer("half_width", 16);
  require(n >= 0 && n <= 1'000'000, model.key_path("half_width"), "must lie in [0, 1e6]");
  try {
    c.params = ModelParams::make(lambda, p, alpha, static_cast<int>(n));
  } catch (const DomainError& e) {
    throw ConfigError(std::string("/model: ") + e.what());
  }
  if (model.has("g")) c.g_spec = model.raw("g");
  if (model.has("a")) c.a_spec = model.raw("a");
  c.params.g = SiteSequence(resolve_profile(c.g_spec, c.params.half_width, base_dir, "/model/g"));
  c.params.a_defect = SiteSequence(resolve_profile(c.a_spec, c.params.half_width, base_dir, "/model/a"));
  c.phi_spec = model.has("phi") ? model.raw("phi") : json(nullptr);
  c.params.phi = parse_phi(c.phi_spec, p);
  model.finish();
  try {
    c.params.validate();
  } catch (const DomainError& e) {
    throw ConfigError(std::string("/model: ") + e.what());
  }

  Section noise = top.child("noise");
  if (noise.has("seeds")) {
    c.seeds.clear();
    const json& seeds = noise.raw("seeds");
    require(seeds.is_array() && !seeds.empty(), noise.key_path("seeds"), "expected a non-empty array of integers");
    for (const auto& e : seeds) {
      require(e.is_number_unsigned(), noise.key_path("seeds"), "seeds must be non-negative integers");
      c.seeds.push_back(e.get<std::uint64_t>());
    }
  }
  c.dt = noise.number("dt", c.dt);
  require(c.dt > 0.0 && c.dt <= 1.0, noise.key_path("dt"), "must lie in (0, 1]");
  c.radius_horizon = noise.number("radius_horizon", c.radius_horizon);
  require(c.radius_horizon > 0.0, noise.key_path("radius_horizon"), "must be > 0");
  noise.finish();

  Section integ = top.child("integrator");
  c.integrator.tol = integ.number("tol", c.integrator.tol);
  require(c.integrator.tol > 0.0 && c.integrator.tol < 1.0, integ.key_path("tol"), "must lie in (0, 1)");
  c.integrator.max_step = integ.number("max_step", c.integrator.max_step);
  require(c.integrator.max_step > 0.0, integ.key_path("max_step"), "must be > 0");
  c.integrator.blowup_norm = integ.number("blowup_norm", c.integrator.blowup_norm);
  const std::string kernel = integ.string("kernel", "automatic");
  if (kernel == "automatic") c.integrator.kernel = KernelPolicy::automatic;
  else if (kernel == "serial") c.integrator.kernel = KernelPolicy::serial;
  else if (kernel == "parallel") c.integrator.kernel = KernelPolicy::parallel;
  else if (kernel == "reference") c.integrator.kernel = KernelPolicy::reference;
  else throw ConfigError(integ.key_path("kernel") + ": expected automatic, serial, parallel or reference");
  integ.finish();

  Section samples = top.child("samples");
  c.samples.unit_sites = static_cast<int>(samples.integer("unit_sites", c.samples.unit_sites));
  c.samples.random_directions = static_cast<int>(samples.integer("random_directions", c.samples.random_directions));
  c.samples.seed = static_cast<std::uint64_t>(samples.integer("seed", static_cast<long long>(c.samples.seed)));
  c.samples.include_zero = samples.boolean("include_zero", c.samples.include_zero);
  require(c.samples.unit_sites >= 0 && c.samples.random_directions >= 0, samples.where(), "counts must be >= 0");
  samples.finish();

  Section ex = top.child("experiment");
  c.T = ex.number("T", c.T);
  require(c.T > 0.0, ex.key_path("T"), "must be > 0");
  c.checkpoint_spacing = ex.number("checkpoint_spacing", c.checkpoint_spacing);
  require(c.checkpoint_spacing > 0.0, ex.key_path("checkpoint_spacing"), "must be > 0");
  if (ex.has("v0")) c.v0_spec = ex.raw("v0");
  c.v0 = resolve_profile(c.v0_spec, c.params.half_width, base_dir, "/experiment/v0");
  for (double s : ex.numbers("tail_sites", {})) {
    require(s == std::floor(s) && s >= 0 && s <= c.params.half_width, ex.key_path("tail_sites"),
            "sites must be integers in [0, N]");
    c.tail_sites.push_back(static_cast<int>(s));
  }
  c.snapshots = ex.boolean("snapshots", c.snapshots);
  c.pullback_times = ex.numbers("pullback_times", c.pullback_times);
  for (std::size_t k = 0; k < c.pullback_times.size(); ++k) {
    const double t = c.pullback_times[k];
    require(t >= 0.0 && (k == 0 || t > c.pullback_times[k - 1]), ex.key_path("pullback_times"),
            "must be non-negative and increasing");
    require(std::abs(t / c.dt - std::round(t / c.dt)) <= 1e-7 * std::max(1.0, t / c.dt), ex.key_path("pullback_times"),
            "must be multiples of noise.dt");
  }
  require(!c.pullback_times.empty(), ex.key_path("pullback_times"), "must not be empty");
  c.ball_radius = ex.number("ball_radius", c.ball_radius);
  require(c.ball_radius >= 0.0, ex.key_path("ball_radius"), "must be >= 0");
  c.gammas = ex.numbers("gammas", c.gammas);
  for (double g : c.gammas) require(g > 0.0, ex.key_path("gammas"), "must be > 0");
  c.temper_times = ex.numbers("temper_times", c.temper_times);
  c.inner_radius = ex.number("inner_radius", c.inner_radius);
  c.outer_radius = ex.number("outer_radius", c.outer_radius);
  require(c.inner_radius >= 0.0 && c.outer_radius >= 0.0, ex.where(), "radii must be >= 0");
  c.epsilon = ex.number("epsilon", c.epsilon);
  require(c.epsilon > 0.0, ex.key_path("epsilon"), "must be > 0");
  c.cutoff_width = static_cast<int>(ex.integer("cutoff_width", c.cutoff_width));
  require(c.cutoff_width >= 0, ex.key_path("cutoff_width"), "must be >= 0");
  c.ou_span = ex.number("ou_span", c.ou_span);
  require(c.ou_span > 0.0, ex.key_path("ou_span"), "must be > 0");
  c.threshold = ex.number("threshold", c.threshold);
  require(c.threshold > 0.0, ex.key_path("threshold"), "must be > 0");
  ex.finish();

  Section phi_check = top.child("verify_phi");
  c.c1 = phi_check.optional_number("c1");
  c.c2 = phi_check.optional_number("c2");
  c.k = phi_check.optional_number("k");
  c.a_bound = phi_check.number("a", c.a_bound);
  c.growth.per_decade = static_cast<int>(phi_check.integer("growth_per_decade", c.growth.per_decade));
  c.pairs.per_decade = static_cast<int>(phi_check.integer("pair_per_decade", c.pairs.per_decade));
  c.pairs.random_pairs = static_cast<std::size_t>(phi_check.integer("random_pairs", static_cast<long long>(c.pairs.random_pairs)));
  const double u_min = phi_check.number("u_min", c.growth.u_min);
  const double u_max = phi_check.number("u_max", c.growth.u_max);
  require(u_min > 0.0 && u_max > u_min, phi_check.where(), "need 0 < u_min < u_max");
  require(c.growth.per_decade > 0 && c.pairs.per_decade > 0, phi_check.where(), "per_decade must be > 0");
  c.growth.u_min = c.pairs.u_min = u_min;
  c.growth.u_max = c.pairs.u_max = u_max;
  phi_check.finish();

  Section out = top.child("output");
  c.out_dir = out.string("dir", c.out_dir.string());
  out.finish();

  top.finish();
  return c;
}

ExperimentConfig load_config(const fs::path& path) {
  std::string text;
  try {
    text = io::read_text(path);
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  return parse_config(text, path.has_parent_path() ? path.parent_path() : fs::path("."));
}

ExperimentSetup ExperimentConfig::setup() const {
  ExperimentSetup s;
  s.params = params;
  s.dt = dt;
  s.integrator = integrator;
  s.radius_horizon = radius_horizon;
  s.samples = samples;
  return s;
}

json ExperimentConfig::resolved() const {
  auto kernel_name = [](KernelPolicy k) {
    switch (k) {
      case KernelPolicy::reference: return "reference";
      case KernelPolicy::serial: return "serial";
      case KernelPolicy::parallel: return "parallel";
      case KernelPolicy::automatic: break;
    }
    return "automatic";
  };
  auto optional = [](const std::optional<double>& x) { return x ? json(*x) : json(nullptr); };
  json j;
  j["model"] = {{"lambda", params.lambda}, {"p", params.p},     {"alpha", params.alpha},
                {"half_width", params.half_width}, {"g", g_spec}, {"a", a_spec},
                {"phi", phi_spec}};
  j["noise"] = {{"seeds", seeds}, {"dt", dt}, {"radius_horizon", radius_horizon}};
  j["integrator"] = {{"tol", integrator.tol},
                     {"max_step", std::isfinite(integrator.max_step) ? json(integrator.max_step) : json(nullptr)},
                     {"blowup_norm", integrator.blowup_norm},
                     {"kernel", kernel_name(integrator.kernel)}};
  j["samples"] = {{"unit_sites", samples.unit_sites},
                  {"random_directions", samples.random_directions},
                  {"seed", samples.seed},
                  {"include_zero", samples.include_zero}};
  j["experiment"] = {{"T", T},
                     {"checkpoint_spacing", checkpoint_spacing},
                     {"v0", v0_spec},
                     {"tail_sites", tail_sites},
                     {"snapshots", snapshots},
                     {"pullback_times", pullback_times},
                     {"ball_radius", ball_radius},
                     {"gammas", gammas},
                     {"temper_times", temper_times},
                     {"inner_radius", inner_radius},
                     {"outer_radius", outer_radius},
                     {"epsilon", epsilon},
                     {"cutoff_width", cutoff_width},
                     {"ou_span", ou_span},
                     {"threshold", threshold}};
  j["verify_phi"] = {{"c1", optional(c1)},
                     {"c2", optional(c2)},
                     {"k", optional(k)},
                     {"a", a_bound},
                     {"growth_per_decade", growth.per_decade},
                     {"pair_per_decade", pairs.per_decade},
                     {"random_pairs", pairs.random_pairs},
                     {"u_min", growth.u_min},
                     {"u_max", growth.u_max}};
  j["output"] = {{"dir", out_dir.string()}};
  return j;
}

}  // namespace plab::app
