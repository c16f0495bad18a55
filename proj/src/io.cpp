#include "wnls/io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "wnls/errors.hpp"

namespace wnls {

namespace fs = std::filesystem;

SolverConfig RunConfig::solver() const {
  SolverConfig c;
  c.lambda = lambda;
  c.dt = dt;
  c.t_end = t_end;
  c.snapshot_every = snapshot_every;
  c.renormalized = renormalized;
  c.dealias = dealias;
  c.override_small_data = force;
  return c;
}

std::vector<double> RunConfig::scales() const {
  return eps_list.empty() ? std::vector<double>{eps} : eps_list;
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "n", "seed", "seeds", "eps", "eps_list", "mollifier", "lambda", "dt", "t_end", "snapshot_every",
      "renormalized", "dealias", "gamma", "kappa", "kappa_prime", "M", "first_seed", "v0_norm", "v0_seed",
      "force", "output_dir"};
  return keys;
}

namespace {

template <typename T>
T get_as(const nlohmann::json& doc, const std::string& key) {
  try {
    return doc.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw InvalidConfig("config key '" + key + "' has the wrong type");
  }
}

std::uint64_t get_seed(const nlohmann::json& doc, const std::string& key) {
  const auto& v = doc.at(key);
  if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
    throw InvalidConfig("config key '" + key + "' must be a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

int get_int(const nlohmann::json& doc, const std::string& key) {
  const auto& v = doc.at(key);
  if (!v.is_number_integer()) throw InvalidConfig("config key '" + key + "' must be an integer");
  return v.get<int>();
}

double get_number(const nlohmann::json& doc, const std::string& key) {
  const auto& v = doc.at(key);
  if (!v.is_number()) throw InvalidConfig("config key '" + key + "' must be a number");
  return v.get<double>();
}

}  // namespace

RunConfig parse_config(const nlohmann::json& doc) {
  if (!doc.is_object()) throw InvalidConfig("config must be a JSON object");
  const auto& keys = config_keys();
  for (const auto& [key, value] : doc.items()) {
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      throw InvalidConfig("unknown config key '" + key + "'");
    }
  }

  RunConfig c;
  if (doc.contains("n")) c.n = get_int(doc, "n");
  if (doc.contains("seed")) c.seed = get_seed(doc, "seed");
  if (doc.contains("seeds")) {
    if (!doc["seeds"].is_array()) throw InvalidConfig("config key 'seeds' must be an array of seeds");
    for (const auto& s : doc["seeds"]) {
      if (!s.is_number_integer() || s.get<std::int64_t>() < 0) {
        throw InvalidConfig("seeds: every entry must be a non-negative integer");
      }
      c.seeds.push_back(s.get<std::uint64_t>());
    }
  }
  if (doc.contains("eps")) c.eps = get_number(doc, "eps");
  if (doc.contains("eps_list")) {
    if (!doc["eps_list"].is_array()) throw InvalidConfig("config key 'eps_list' must be an array of numbers");
    for (const auto& e : doc["eps_list"]) {
      if (!e.is_number()) throw InvalidConfig("config key 'eps_list' must be an array of numbers");
      c.eps_list.push_back(e.get<double>());
    }
  }
  if (doc.contains("mollifier")) c.mollifier = get_as<std::string>(doc, "mollifier");
  if (doc.contains("lambda")) c.lambda = get_int(doc, "lambda");
  if (doc.contains("dt")) c.dt = get_number(doc, "dt");
  if (doc.contains("t_end")) c.t_end = get_number(doc, "t_end");
  if (doc.contains("snapshot_every")) c.snapshot_every = get_int(doc, "snapshot_every");
  if (doc.contains("renormalized")) c.renormalized = get_as<bool>(doc, "renormalized");
  if (doc.contains("dealias")) c.dealias = get_as<bool>(doc, "dealias");
  if (doc.contains("gamma")) c.gamma = get_number(doc, "gamma");
  if (doc.contains("kappa")) c.kappa = get_number(doc, "kappa");
  if (doc.contains("kappa_prime")) c.kappa_prime = get_number(doc, "kappa_prime");
  if (doc.contains("M")) c.samples = static_cast<std::size_t>(get_seed(doc, "M"));
  if (doc.contains("first_seed")) c.first_seed = get_seed(doc, "first_seed");
  if (doc.contains("v0_norm")) c.v0_norm = get_number(doc, "v0_norm");
  if (doc.contains("v0_seed")) c.v0_seed = get_seed(doc, "v0_seed");
  if (doc.contains("force")) c.force = get_as<bool>(doc, "force");
  if (doc.contains("output_dir")) c.output_dir = get_as<std::string>(doc, "output_dir");
  validate(c);
  return c;
}

RunConfig parse_config(const fs::path& path, const nlohmann::json& overrides) {
  nlohmann::json doc = nlohmann::json::object();
  if (!path.empty()) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file " + path.string());
    try {
      doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      throw InvalidConfig("config file " + path.string() + " is not valid JSON: " + e.what());
    }
    if (!doc.is_object()) throw InvalidConfig("config must be a JSON object");
  }
  if (!overrides.is_null()) {
    if (!overrides.is_object()) throw InvalidConfig("overrides must be a JSON object");
    for (const auto& [key, value] : overrides.items()) doc[key] = value;
  }
  return parse_config(doc);
}

void validate(RunConfig& c) {
  if (c.n < 4 || c.n % 2 != 0) throw InvalidConfig("n: n must be even and >= 4");
  if (!(c.eps >= 0.0) || !std::isfinite(c.eps)) throw InvalidConfig("eps: eps must be >= 0");
  for (double e : c.eps_list) {
    if (!(e > 0.0) || !std::isfinite(e)) throw InvalidConfig("eps_list: every entry must be > 0");
  }
  try {
    (void)c.rho();
  } catch (const Error&) {
    throw InvalidConfig("mollifier: must be 'gaussian' or 'raised-cosine', got '" + c.mollifier + "'");
  }
  if (c.lambda < -1 || c.lambda > 1) throw InvalidConfig("lambda: lambda must be -1, 0 or 1");
  if (!(c.dt > 0.0) || !std::isfinite(c.dt)) throw InvalidConfig("dt: dt must be > 0");
  if (!(c.t_end >= 0.0) || !std::isfinite(c.t_end)) throw InvalidConfig("t_end: t_end must be >= 0");
  if (c.snapshot_every < 1) throw InvalidConfig("snapshot_every: snapshot_every must be >= 1");
  if (!(c.gamma > 1.0 && c.gamma < 2.0)) throw InvalidConfig("gamma: gamma must lie in (1, 2)");
  if (!(c.kappa > 0.0 && c.kappa < c.kappa_prime && c.kappa_prime <= 1.0)) {
    throw InvalidConfig("kappa, kappa_prime: need 0 < kappa < kappa_prime <= 1");
  }
  if (c.samples < 100) throw InvalidConfig("M: M must be >= 100");
  if (!(c.v0_norm >= 0.0) || !std::isfinite(c.v0_norm)) throw InvalidConfig("v0_norm: v0_norm must be >= 0");

  c.warnings.clear();
  c.unresolved = false;
  const TorusGrid grid(c.n);
  for (double e : c.scales()) {
    if (e > 0.0 && !mollifier_resolved(e, grid)) {
      c.unresolved = true;
      char buf[128];
      std::snprintf(buf, sizeof buf, "mollifier unresolved by grid: eps = %g < 4/n = %g", e, 4.0 / c.n);
      c.warnings.emplace_back(buf);
    }
  }
}

void enforce_resolution_policy(const RunConfig& config) {
  if (config.unresolved && !config.force) {
    throw UnresolvedMollifier(config.warnings.front() + " (pass --force to run anyway)");
  }
}

nlohmann::ordered_json to_json(const RunConfig& c) {
  nlohmann::ordered_json j;
  j["n"] = c.n;
  j["seed"] = c.seed;
  j["seeds"] = c.seeds;
  j["eps"] = c.eps;
  j["eps_list"] = c.eps_list;
  j["mollifier"] = c.mollifier;
  j["lambda"] = c.lambda;
  j["dt"] = c.dt;
  j["t_end"] = c.t_end;
  j["snapshot_every"] = c.snapshot_every;
  j["renormalized"] = c.renormalized;
  j["dealias"] = c.dealias;
  j["gamma"] = c.gamma;
  j["kappa"] = c.kappa;
  j["kappa_prime"] = c.kappa_prime;
  j["M"] = c.samples;
  j["first_seed"] = c.first_seed;
  j["v0_norm"] = c.v0_norm;
  j["v0_seed"] = c.v0_seed;
  j["force"] = c.force;
  j["output_dir"] = c.output_dir;
  return j;
}

// ---------------------------------------------------------------------------

namespace {

void put_le(std::array<char, 16>& buf, std::size_t offset, double x) {
  const auto bits = std::bit_cast<std::uint64_t>(x);
  for (int i = 0; i < 8; ++i) buf[offset + i] = static_cast<char>((bits >> (8 * i)) & 0xffu);
}

double get_le(const std::array<char, 16>& buf, std::size_t offset) {
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) {
    bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(buf[offset + i])) << (8 * i);
  }
  return std::bit_cast<double>(bits);
}

std::ofstream open_for_write(const fs::path& path, std::ios::openmode mode) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  }
  std::ofstream out(path, mode);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  return out;
}

}  // namespace

void write_field_snapshot(const SpectralField& f, std::ostream& out) {
  const auto& grid = f.grid();
  const int n = grid.n();
  nlohmann::ordered_json header;
  header["magic"] = kSnapshotMagic;
  header["n"] = n;
  header["view"] = "spectral";
  header["layout"] = kSnapshotLayout;
  header["real_flag"] = f.real_flag();
  out << header.dump() << '\n';

  std::array<char, 16> buf{};
  for (int k1 = -n / 2; k1 < n / 2; ++k1) {
    for (int k2 = -n / 2; k2 < n / 2; ++k2) {
      const Complex c = f.at(k1, k2);
      put_le(buf, 0, c.real());
      put_le(buf, 8, c.imag());
      out.write(buf.data(), buf.size());
    }
  }
  if (!out) throw IoError("snapshot write failed");
}

void write_field_snapshot(const SpectralField& f, const fs::path& path) {
  auto out = open_for_write(path, std::ios::binary | std::ios::trunc);
  write_field_snapshot(f, out);
  out.close();
  if (!out) throw IoError("snapshot write failed: " + path.string());
}

SpectralField read_field_snapshot(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw BadMagic("snapshot has no header line");
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error&) {
    throw BadMagic("snapshot header is not a JSON line");
  }
  if (!header.is_object() || !header.contains("magic") || header["magic"] != kSnapshotMagic) {
    throw BadMagic("snapshot magic is not WNLS1");
  }
  if (!header.contains("n") || !header["n"].is_number_integer()) throw HeaderMismatch("snapshot header lacks n");
  const int n = header["n"].get<int>();
  if (n < 4 || n % 2 != 0) throw HeaderMismatch("snapshot header n must be even and >= 4");
  if (header.value("view", "") != "spectral") throw HeaderMismatch("snapshot view must be 'spectral'");
  if (header.value("layout", "") != kSnapshotLayout) {
    throw HeaderMismatch(std::string("snapshot layout must be '") + kSnapshotLayout + "'");
  }
  if (!header.contains("real_flag") || !header["real_flag"].is_boolean()) {
    throw HeaderMismatch("snapshot header lacks real_flag");
  }

  const TorusGrid grid(n);
  auto field = SpectralField::zeros(grid, header["real_flag"].get<bool>());
  auto coeffs = field.coeffs();
  std::array<char, 16> buf{};
  for (int k1 = -n / 2; k1 < n / 2; ++k1) {
    for (int k2 = -n / 2; k2 < n / 2; ++k2) {
      in.read(buf.data(), buf.size());
      if (in.gcount() != static_cast<std::streamsize>(buf.size())) {
        throw TruncatedPayload("snapshot payload shorter than 16 n^2 bytes");
      }
      coeffs[grid.index(grid.slot(k1), grid.slot(k2))] = Complex(get_le(buf, 0), get_le(buf, 8));
    }
  }
  if (in.peek() != std::char_traits<char>::eof()) throw HeaderMismatch("snapshot payload longer than 16 n^2 bytes");
  return field;
}

SpectralField read_field_snapshot(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open snapshot " + path.string());
  return read_field_snapshot(in);
}

// ---------------------------------------------------------------------------

void write_series_csv(const DiagnosticSeries& series, std::ostream& out) {
  out << kSeriesHeader << '\n';
  char buf[32];
  const auto put = [&](double x, char sep) {
    std::snprintf(buf, sizeof buf, "%.17g", x);
    out << buf << sep;
  };
  for (std::size_t i = 0; i < series.size(); ++i) {
    put(series.times[i], ',');
    put(series.mass_u[i], ',');
    put(series.t_mass[i], ',');
    put(series.t_energy[i], ',');
    put(series.h1_v[i], ',');
    put(series.h2_v[i], ',');
    put(series.k_eps[i], '\n');
  }
  if (!out) throw IoError("series write failed");
}

void write_series_csv(const DiagnosticSeries& series, const fs::path& path) {
  auto out = open_for_write(path, std::ios::trunc);
  write_series_csv(series, out);
  out.close();
  if (!out) throw IoError("series write failed: " + path.string());
}

DiagnosticSeries read_series_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kSeriesHeader) throw IoError("series CSV header mismatch");
  DiagnosticSeries s;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> cells;
    std::stringstream row(line);
    std::string cell;
    while (std::getline(row, cell, ',')) {
      char* end = nullptr;
      const double x = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str() || *end != '\0') throw IoError("bad number in series CSV: '" + cell + "'");
      cells.push_back(x);
    }
    if (cells.size() != 7) throw IoError("series CSV row must have 7 columns");
    s.times.push_back(cells[0]);
    s.mass_u.push_back(cells[1]);
    s.t_mass.push_back(cells[2]);
    s.t_energy.push_back(cells[3]);
    s.h1_v.push_back(cells[4]);
    s.h2_v.push_back(cells[5]);
    s.k_eps.push_back(cells[6]);
  }
  return s;
}

DiagnosticSeries read_series_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return read_series_csv(in);
}

// ---------------------------------------------------------------------------

nlohmann::ordered_json report_to_json(const ExperimentReport& report) {
  nlohmann::ordered_json j;
  j["name"] = report.name;
  j["seeds"] = report.seeds;
  j["parameters"] = report.parameters;

  auto tables = nlohmann::ordered_json::array();
  for (const auto& t : report.tables) {
    nlohmann::ordered_json jt;
    jt["name"] = t.name;
    jt["columns"] = t.columns;
    jt["rows"] = t.rows;
    tables.push_back(jt);
  }
  j["tables"] = tables;

  auto fits = nlohmann::ordered_json::array();
  for (const auto& f : report.fits) {
    nlohmann::ordered_json jf;
    jf["name"] = f.name;
    jf["model"] = to_string(f.fit.model);
    jf["beta"] = f.fit.beta;
    jf["slope"] = f.fit.slope;
    jf["intercept"] = f.fit.intercept;
    jf["r_squared"] = f.fit.r_squared;
    auto pts = nlohmann::ordered_json::array();
    for (const auto& [x, y] : f.fit.points) pts.push_back({x, y});
    jf["points"] = pts;
    fits.push_back(jf);
  }
  j["fits"] = fits;

  auto verdicts = nlohmann::ordered_json::array();
  for (const auto& v : report.verdicts) {
    nlohmann::ordered_json jv;
    jv["criterion"] = v.criterion;
    jv["passed"] = v.passed;
    jv["detail"] = v.detail;
    verdicts.push_back(jv);
  }
  j["verdicts"] = verdicts;
  j["all_passed"] = report.all_passed();
  return j;
}

std::string render_report(const ExperimentReport& report) { return report_to_json(report).dump(2) + "\n"; }

void write_report_json(const ExperimentReport& report, const fs::path& path) {
  write_text(path, render_report(report));
}

void write_text(const fs::path& path, const std::string& text) {
  auto out = open_for_write(path, std::ios::trunc);
  out << text;
  out.close();
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace wnls
