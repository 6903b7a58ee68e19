#include "plab/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "plab/errors.hpp"

namespace plab::io {

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

namespace {

std::string join_header(const std::vector<std::string>& header) {
  std::string s;
  for (std::size_t k = 0; k < header.size(); ++k) {
    if (k) s += ',';
    s += header[k];
  }
  return s + '\n';
}

json number(double x) {
  if (std::isfinite(x)) return x;
  return format_number(x);
}

json numbers(const std::vector<double>& xs) {
  json a = json::array();
  for (double x : xs) a.push_back(number(x));
  return a;
}

}  // namespace

CsvTable::CsvTable(std::vector<std::string> header) : columns_(header.size()), text_(join_header(header)) {}

void CsvTable::add_row(const std::vector<double>& row) {
  if (row.size() != columns_) throw Error("CsvTable: row has " + std::to_string(row.size()) + " cells, expected " +
                                          std::to_string(columns_));
  for (std::size_t k = 0; k < row.size(); ++k) {
    if (k) text_ += ',';
    text_ += format_number(row[k]);
  }
  text_ += '\n';
  ++rows_;
}

LongTable::LongTable() : text_("series,x,y\n") {}

void LongTable::add(std::string_view series, double x, double y) {
  text_ += series;
  text_ += ',' + format_number(x) + ',' + format_number(y) + '\n';
}

// ---------------------------------------------------------------------------

json to_json(const LatticeVector& v) {
  json j;
  j["half_width"] = v.half_width();
  j["values"] = numbers(v.storage());
  return j;
}

LatticeVector lattice_from_json(const json& j) {
  if (!j.is_object() || !j.contains("half_width") || !j.contains("values"))
    throw DomainError("lattice vector JSON needs half_width and values");
  const int n = j.at("half_width").get<int>();
  if (n < 0) throw DomainError("lattice vector JSON: half_width must be >= 0");
  auto values = j.at("values").get<std::vector<double>>();
  if (values.size() != static_cast<std::size_t>(2 * n + 1))
    throw DomainError("lattice vector JSON: expected " + std::to_string(2 * n + 1) + " values");
  return LatticeVector(n, std::move(values));
}

std::string to_csv(const LatticeVector& v) {
  std::string s = "site,value\n";
  for (int i = -v.half_width(); i <= v.half_width(); ++i) s += std::to_string(i) + ',' + format_number(v[i]) + '\n';
  return s;
}

LatticeVector lattice_from_csv(std::string_view text, int half_width) {
  std::vector<std::pair<int, double>> entries;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw DomainError("site CSV line " + std::to_string(line_no) + ": expected site,value");
    const std::string site_s = line.substr(0, comma);
    const std::string value_s = line.substr(comma + 1);
    int site = 0;
    const auto r = std::from_chars(site_s.data(), site_s.data() + site_s.size(), site);
    if (r.ec != std::errc() || r.ptr != site_s.data() + site_s.size()) {
      if (line_no == 1) continue;  // header
      throw DomainError("site CSV line " + std::to_string(line_no) + ": bad site '" + site_s + "'");
    }
    double value = 0.0;
    try {
      std::size_t used = 0;
      value = std::stod(value_s, &used);
      if (used != value_s.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw DomainError("site CSV line " + std::to_string(line_no) + ": bad value '" + value_s + "'");
    }
    entries.emplace_back(site, value);
  }
  int n = half_width;
  if (n < 0) {
    n = 0;
    for (const auto& [site, value] : entries) n = std::max(n, std::abs(site));
  }
  LatticeVector v(n);
  for (const auto& [site, value] : entries) {
    if (std::abs(site) > n) throw DomainError("site CSV: site " + std::to_string(site) + " outside [-N, N]");
    v[site] = value;
  }
  return v;
}

json to_json(const ConditionReport& r) {
  auto witness = [](const ConditionWitness& w) {
    json j;
    j["u"] = number(w.u);
    j["v"] = number(w.v);
    j["margin"] = number(w.margin);
    j["bound"] = w.bound;
    return j;
  };
  json j;
  j["condition"] = to_string(r.condition);
  j["pass"] = r.pass();
  j["c1"] = number(r.c1);
  j["c2"] = number(r.c2);
  j["k"] = number(r.k);
  j["a_bound"] = number(r.a_bound);
  j["samples"] = r.samples;
  j["worst_margin"] = number(r.worst_margin);
  j["worst"] = witness(r.worst);
  j["violations"] = json::array();
  for (const auto& w : r.violations) j["violations"].push_back(witness(w));
  return j;
}

// ---------------------------------------------------------------------------

std::string path_csv(const WienerPath& omega, const OUPath& ou) {
  CsvTable t({"t", "omega", "z"});
  for (std::int64_t k = omega.k_min(); k <= omega.k_max(); ++k) {
    const double z = (k >= ou.k_min() && k <= ou.k_max()) ? ou.z_node(k) : std::nan("");
    t.add_row({omega.time(k), omega.value(k), z});
  }
  return t.text();
}

json path_manifest(const WienerPath& omega) {
  json j;
  j["seed"] = omega.seed();
  j["dt"] = omega.dt();
  j["k_min"] = omega.k_min();
  j["k_max"] = omega.k_max();
  j["t_min"] = omega.t_min();
  j["t_max"] = omega.t_max();
  j["origin_offset"] = omega.origin_offset();
  return j;
}

std::string trajectory_csv(const Trajectory& traj, double p, const std::vector<int>& tail_sites) {
  std::vector<std::string> header{"t", "norm_l2", "norm_p1"};
  for (int i0 : tail_sites) header.push_back("tail_" + std::to_string(i0));
  CsvTable t(header);
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    const LatticeVector& v = traj.states[k];
    std::vector<double> row{traj.times[k], norm_l2(v), norm_lp(v, p + 1.0)};
    for (int i0 : tail_sites) row.push_back(tail_energy(v, i0));
    t.add_row(row);
  }
  return t.text();
}

json trajectory_snapshots(const Trajectory& traj) {
  json j = json::array();
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    json s;
    s["t"] = traj.times[k];
    s["state"] = to_json(traj.states[k]);
    j.push_back(std::move(s));
  }
  return j;
}

std::string energy_csv(const EnergyReport& r) {
  CsvTable t({"t", "norm2", "dissipation_l2", "dissipation_power", "lhs", "majorant", "residual"});
  for (std::size_t k = 0; k < r.times.size(); ++k)
    t.add_row({r.times[k], r.norm2[k], r.dissipation_l2[k], r.dissipation_power[k], r.lhs[k], r.majorant[k],
               r.residual[k]});
  return t.text();
}

json to_json(const EnergyReport& r) {
  json j;
  j["checkpoints"] = r.times.size();
  j["min_residual"] = number(r.min_residual());
  j["eta"] = number(r.eta);
  j["xi"] = number(r.xi);
  j["crude_bound_excess"] = number(r.crude_bound_excess);
  return j;
}

json to_json(const TemperednessReport& r) {
  json j;
  j["threshold"] = r.threshold;
  j["vanishing"] = r.vanishing;
  j["times"] = numbers(r.times);
  j["z_over_t"] = numbers(r.z_over_t);
  j["running_mean"] = numbers(r.running_mean);
  return j;
}

std::string temperedness_csv(const TemperednessReport& r) {
  CsvTable t({"t", "z_over_t", "running_mean"});
  for (std::size_t k = 0; k < r.times.size(); ++k) t.add_row({r.times[k], r.z_over_t[k], r.running_mean[k]});
  return t.text();
}

// ---------------------------------------------------------------------------

std::string absorption_csv(const AbsorptionReport& r) {
  CsvTable t({"seed", "t", "max_norm", "radius", "inside"});
  for (const auto& row : r.rows)
    t.add_row({static_cast<double>(row.seed), row.t, row.max_norm, row.radius, row.inside ? 1.0 : 0.0});
  return t.text();
}

json to_json(const AbsorptionReport& r) {
  json j;
  j["ball_radius"] = r.ball_radius;
  j["all_absorbed_at_last"] = r.all_absorbed_at_last();
  j["seeds"] = json::array();
  for (const auto& s : r.seeds) {
    json e;
    e["seed"] = s.seed;
    e["radius"] = number(s.radius);
    e["observed_time"] = number(s.observed_time);
    e["bound_time"] = number(s.bound_time);
    j["seeds"].push_back(std::move(e));
  }
  return j;
}

std::string radius_temper_csv(const RadiusTemperReport& r) {
  CsvTable t({"seed", "gamma", "t", "r_squared", "weighted"});
  for (const auto& row : r.rows) t.add_row({static_cast<double>(row.seed), row.gamma, row.t, row.r_squared, row.weighted});
  return t.text();
}

json to_json(const RadiusTemperReport& r) {
  json j;
  j["threshold"] = r.threshold;
  j["summaries"] = json::array();
  for (const auto& s : r.summaries) {
    json e;
    e["seed"] = s.seed;
    e["gamma"] = s.gamma;
    e["decades"] = number(s.decades);
    e["decreasing"] = s.decreasing;
    e["below_threshold"] = s.below_threshold;
    j["summaries"].push_back(std::move(e));
  }
  return j;
}

std::string nullity_csv(const NullityReport& r) {
  CsvTable t({"seed", "t", "radius", "min_i0", "sup_tail", "decay_term", "dissipation_terms", "forcing_tail",
              "cutoff_tail"});
  for (const auto& row : r.rows)
    t.add_row({static_cast<double>(row.seed), row.t, row.radius, static_cast<double>(row.min_i0), row.sup_tail,
               row.decay_term, row.dissipation_terms, row.forcing_tail, row.cutoff_tail});
  return t.text();
}

json to_json(const NullityReport& r) {
  json j;
  j["epsilon"] = r.epsilon;
  j["cutoff_width"] = r.cutoff_width;
  j["seeds"] = json::array();
  for (const auto& s : r.seeds) {
    json e;
    e["seed"] = s.seed;
    e["t_tilde"] = s.t_tilde;
    e["n_tilde"] = s.n_tilde;
    e["non_increasing"] = s.non_increasing;
    e["stabilized"] = s.stabilized;
    j["seeds"].push_back(std::move(e));
  }
  return j;
}

std::string pullback_csv(const PullbackReport& r) {
  CsvTable t({"t", "dist_ab", "dist_ba", "mutual"});
  for (const auto& row : r.rows) t.add_row({row.t, row.dist_ab, row.dist_ba, row.mutual});
  return t.text();
}

json to_json(const PullbackReport& r) {
  json j;
  j["seed"] = r.seed;
  j["eventually_decreasing"] = r.eventually_decreasing;
  j["noise_floor"] = r.noise_floor;
  j["final_mutual"] = r.rows.empty() ? json(nullptr) : number(r.rows.back().mutual);
  return j;
}

// ---------------------------------------------------------------------------

void write_text(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error("write failed: " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace plab::io
