#include "fmclp/experiments.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <tuple>

#include "fmclp/instance_io.hpp"

namespace fmclp {

namespace {

std::string num_str(double v) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, r.ptr);
}

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = s.find(sep, start);
    if (pos == std::string::npos) { out.push_back(s.substr(start)); break; }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    out += c;
  }
  out += "\"";
  return out;
}

// Splits one CSV line honoring double-quoted fields with "" escapes.
std::vector<std::string> csv_split(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') { cur += '"'; ++i; }
        else quoted = false;
      } else cur += c;
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

double to_double(const std::string& s, const std::string& what) {
  std::string f = trim(s);
  double v = 0;
  auto r = std::from_chars(f.data(), f.data() + f.size(), v);
  if (r.ec != std::errc{} || r.ptr != f.data() + f.size())
    throw std::runtime_error("cannot parse " + what + " value '" + f + "'");
  return v;
}

long long to_int(const std::string& s, const std::string& what) {
  std::string f = trim(s);
  long long v = 0;
  auto r = std::from_chars(f.data(), f.data() + f.size(), v);
  if (r.ec != std::errc{} || r.ptr != f.data() + f.size())
    throw std::runtime_error("cannot parse " + what + " value '" + f + "'");
  return v;
}

std::string opt_str(const std::optional<double>& v) { return v ? num_str(*v) : ""; }

std::optional<double> opt_parse(const std::string& s, const std::string& what) {
  std::string f = trim(s);
  if (f.empty() || f == "null") return std::nullopt;
  return to_double(f, what);
}

int pool_size(int configured, std::size_t jobs) {
  int n = configured;
  if (const char* env = std::getenv("FMCLP_THREADS")) {
    int e = 0;
    auto r = std::from_chars(env, env + std::string(env).size(), e);
    if (r.ec == std::errc{} && e > 0) n = e;
  }
  if (n <= 0) n = static_cast<int>(std::thread::hardware_concurrency());
  if (n <= 0) n = 1;
  return static_cast<int>(std::min<std::size_t>(n, std::max<std::size_t>(jobs, 1)));
}

// Runs job(i) for i in [0, jobs) on a pool; each job must catch its own
// domain errors, anything escaping here is a programming error.
void parallel_for(std::size_t jobs, int threads, const std::function<void(std::size_t)>& job) {
  if (jobs == 0) return;
  if (threads <= 1) {
    for (std::size_t i = 0; i < jobs; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < jobs;) job(i);
    });
  for (auto& th : pool) th.join();
}

}  // namespace

const char* space_name(SolveSpace s) {
  return s == SolveSpace::Discrete ? "disc" : "cont";
}

SolveSpace parse_space(const std::string& s) {
  if (s == "disc") return SolveSpace::Discrete;
  if (s == "cont") return SolveSpace::ContinuousFDS;
  throw std::invalid_argument("unknown space '" + s + "' (expected disc or cont)");
}

void ExperimentGrid::validate() const {
  if (n_values.empty() || p_values.empty() || R_values.empty() || families.empty() ||
      alphas.empty() || spaces.empty())
    throw std::invalid_argument("grid: every value list must be nonempty");
  for (int n : n_values)
    if (n < 1) throw std::invalid_argument("grid: n values must be >= 1");
  for (int p : p_values)
    if (p < 1) throw std::invalid_argument("grid: p values must be >= 1");
  for (double R : R_values)
    if (!(R > 0)) throw std::invalid_argument("grid: R values must be positive");
  for (const Rational& a : alphas)
    if (a < Rational(0)) throw std::invalid_argument("grid: alpha values must be >= 0");
  std::set<OwaFamily> ff(families.begin(), families.end());
  if (ff.size() != families.size()) throw std::invalid_argument("grid: duplicate family");
  if (!(time_limit > 0)) throw std::invalid_argument("grid: time_limit must be positive");
}

long long ExperimentGrid::cells_per_combo() const {
  long long non_c = 0;
  bool has_c = false;
  for (OwaFamily f : families) {
    if (f == OwaFamily::C) has_c = true;
    else ++non_c;
  }
  return non_c * static_cast<long long>(alphas.size()) + (has_c ? 1 : 0);
}

long long ExperimentGrid::total_cells() const {
  return cells_per_combo() * static_cast<long long>(n_values.size()) *
         static_cast<long long>(p_values.size()) * static_cast<long long>(R_values.size()) *
         static_cast<long long>(spaces.size());
}

std::string result_csv_header() {
  return "instance,n,p,R,space,family,alpha,status,objective,coverage_pct,W,pof,poe,gini,"
         "cpu_seconds,gap,pwl,error";
}

std::string result_csv_row(const ResultRow& r) {
  std::ostringstream os;
  os << csv_quote(r.instance) << "," << r.n << "," << r.p << "," << num_str(r.R) << ","
     << r.space << "," << r.family << "," << csv_quote(r.alpha) << "," << r.status << ","
     << r.objective << "," << opt_str(r.coverage_pct) << ",";
  std::string wcell;
  for (std::size_t k = 0; k < r.W.size(); ++k) {
    if (k) wcell += ";";
    wcell += num_str(r.W[k]);
  }
  os << csv_quote(wcell) << "," << opt_str(r.pof) << "," << opt_str(r.poe) << ","
     << opt_str(r.gini) << "," << num_str(r.cpu_seconds) << "," << num_str(r.gap) << ","
     << (r.pwl ? 1 : 0) << "," << csv_quote(r.error);
  return os.str();
}

std::vector<ResultRow> parse_result_csv(const std::string& text, const std::string& origin) {
  std::vector<ResultRow> rows;
  bool saw_header = false;
  int lineno = 0;
  for (const std::string& raw : split(text, '\n')) {
    ++lineno;
    std::string line = raw;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty() || line[0] == '#') continue;
    if (!saw_header) {
      if (trim(line) != result_csv_header())
        throw std::runtime_error(origin + ":" + std::to_string(lineno) +
                                 ": result schema mismatch");
      saw_header = true;
      continue;
    }
    auto f = csv_split(line);
    if (f.size() != 18)
      throw std::runtime_error(origin + ":" + std::to_string(lineno) +
                               ": expected 18 fields, got " + std::to_string(f.size()));
    ResultRow r;
    r.instance = f[0];
    r.n = static_cast<int>(to_int(f[1], "n"));
    r.p = static_cast<int>(to_int(f[2], "p"));
    r.R = to_double(f[3], "R");
    r.space = trim(f[4]);
    r.family = trim(f[5]);
    r.alpha = trim(f[6]);
    r.status = trim(f[7]);
    r.objective = trim(f[8]);
    r.coverage_pct = opt_parse(f[9], "coverage_pct");
    for (const std::string& w : split(f[10], ';'))
      if (!trim(w).empty()) r.W.push_back(to_double(w, "W entry"));
    r.pof = opt_parse(f[11], "pof");
    r.poe = opt_parse(f[12], "poe");
    r.gini = opt_parse(f[13], "gini");
    r.cpu_seconds = to_double(f[14], "cpu_seconds");
    r.gap = to_double(f[15], "gap");
    std::string pw = trim(f[16]);
    r.pwl = (pw == "1" || pw == "true");
    r.error = f[17];
    rows.push_back(std::move(r));
  }
  if (!saw_header) throw std::runtime_error(origin + ": result schema mismatch (no header)");
  return rows;
}

std::vector<ResultRow> read_result_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open result file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_result_csv(buf.str(), path);
}

namespace {

struct Combo {
  int n, p;
  double R;
  SolveSpace space;
};

struct Cell {
  std::size_t combo;
  OwaFamily family;
  Rational alpha;
};

Instance slice_first_n(const Instance& master, int n) {
  Instance t = master;
  t.points.resize(n);
  t.weights.resize(n);
  t.candidates = t.points;
  t.name = (master.name.empty() ? std::string("instance") : master.name) + "/n" +
           std::to_string(n);
  return t;
}

}  // namespace

std::vector<ResultRow> run_grid(const ExperimentGrid& grid, const Instance& master,
                                const std::string& out_path) {
  grid.validate();
  master.validate();
  for (int n : grid.n_values)
    if (n > static_cast<int>(master.size()))
      throw std::invalid_argument("grid: n exceeds the master instance size");

  std::map<int, Instance> slices;
  for (int n : grid.n_values)
    if (!slices.count(n)) slices.emplace(n, slice_first_n(master, n));

  std::vector<Combo> combos;
  std::vector<Cell> cells;
  for (int n : grid.n_values)
    for (int p : grid.p_values)
      for (double R : grid.R_values)
        for (SolveSpace space : grid.spaces) {
          combos.push_back({n, p, R, space});
          for (OwaFamily fam : grid.families) {
            if (fam == OwaFamily::C) cells.push_back({combos.size() - 1, fam, Rational(0)});
            else
              for (const Rational& a : grid.alphas) cells.push_back({combos.size() - 1, fam, a});
          }
        }

  SolveOptions so;
  so.time_limit = grid.time_limit;

  // phase 1: baselines, one per combo
  std::vector<std::optional<Baselines>> base(combos.size());
  std::vector<std::string> base_err(combos.size());
  const int threads = pool_size(grid.threads, std::max(combos.size(), cells.size()));
  parallel_for(combos.size(), threads, [&](std::size_t i) {
    const Combo& c = combos[i];
    try {
      base[i] = compute_baselines(slices.at(c.n), c.p, c.R, c.space, so);
    } catch (const std::exception& e) {
      base_err[i] = e.what();
    }
  });

  // phase 2: cells
  std::vector<ResultRow> rows(cells.size());
  parallel_for(cells.size(), threads, [&](std::size_t i) {
    const Cell& cell = cells[i];
    const Combo& c = combos[cell.combo];
    const Instance& inst = slices.at(c.n);
    ResultRow& r = rows[i];
    r.instance = inst.name;
    r.n = c.n;
    r.p = c.p;
    r.R = c.R;
    r.space = space_name(c.space);
    r.family = family_name(cell.family);
    r.alpha = cell.alpha.str();
    try {
      FairnessSpec spec;
      spec.weights = owa_family(cell.family, c.p);
      spec.alpha = cell.alpha;
      CoverageSolution sol = c.space == SolveSpace::Discrete
                                 ? solve_discrete(inst, spec, c.p, c.R, so)
                                 : solve_continuous_fds(inst, spec, c.p, c.R, so);
      r.status = status_name(sol.status);
      r.objective = sol.objective.is_neg_inf() ? "-inf" : num_str(sol.objective.value());
      r.W = sol.W;
      r.cpu_seconds = sol.seconds;
      r.gap = sol.gap;
      if (base[cell.combo]) {
        MetricsReport rep = report(sol, inst, *base[cell.combo]);
        r.coverage_pct = rep.coverage_pct;
        r.pof = rep.pof;
        r.poe = rep.poe;
        r.gini = rep.gini;
      } else {
        r.error = "baselines: " + base_err[cell.combo];
      }
    } catch (const std::exception& e) {
      r.status = "Error";
      r.error = e.what();
    }
  });

  if (!out_path.empty()) {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write result file '" + out_path + "'");
    out << "# fmclp-results-v1\n";
    out << "# seed: " << grid.seed << "\n";
    out << "# instance: " << (master.name.empty() ? "instance" : master.name) << "\n";
    out << "# instance_hash: " << instance_hash(master) << "\n";
    out << "# owa_defaults: k=(p+1)/2 beta_mix=1/2\n";
    out << result_csv_header() << "\n";
    for (const ResultRow& r : rows) out << result_csv_row(r) << "\n";
    if (!out) throw std::runtime_error("write failed for '" + out_path + "'");
  }
  return rows;
}

Summary summarize(const std::vector<ResultRow>& rows) {
  struct Bucket {
    long long gap0 = 0, gap1 = 0, gap5 = 0, gap_plus = 0, errors = 0;
  };
  std::map<std::tuple<int, int, std::string>, Bucket> buckets;
  std::map<std::pair<std::string, std::string>, std::array<std::vector<double>, 3>> fair;
  for (const ResultRow& r : rows) {
    Bucket& b = buckets[{r.n, r.p, r.space}];
    if (r.status == "Error") {
      ++b.errors;
    } else if (r.gap <= 0) {
      ++b.gap0;
    } else if (r.gap <= 0.01) {
      ++b.gap1;
    } else if (r.gap <= 0.05) {
      ++b.gap5;
    } else {
      ++b.gap_plus;
    }
    auto& f = fair[{r.family, r.alpha}];
    if (r.pof) f[0].push_back(*r.pof);
    if (r.poe) f[1].push_back(*r.poe);
    if (r.gini) f[2].push_back(*r.gini);
  }

  Summary s;
  std::ostringstream g;
  g << "n,p,space,solved,errors,gap0_pct,gap1_pct,gap5_pct,gap_plus_pct\n";
  for (const auto& [key, b] : buckets) {
    const long long solved = b.gap0 + b.gap1 + b.gap5 + b.gap_plus;
    g << std::get<0>(key) << "," << std::get<1>(key) << "," << std::get<2>(key) << "," << solved
      << "," << b.errors;
    if (solved > 0) {
      auto pct = [&](long long c) { return num_str(100.0 * static_cast<double>(c) / solved); };
      g << "," << pct(b.gap0) << "," << pct(b.gap1) << "," << pct(b.gap5) << ","
        << pct(b.gap_plus);
    } else {
      g << ",,,,";
    }
    g << "\n";
  }
  s.gap_csv = g.str();

  // sorted before summing so the mean never depends on row order
  auto mean_of = [](std::vector<double> v) -> std::string {
    if (v.empty()) return "";
    std::sort(v.begin(), v.end());
    double sum = std::accumulate(v.begin(), v.end(), 0.0);
    return num_str(sum / static_cast<double>(v.size()));
  };
  std::ostringstream f;
  f << "family,alpha,rows_pof,rows_poe,rows_gini,avg_pof,avg_poe,avg_gini\n";
  for (const auto& [key, vals] : fair) {
    f << key.first << "," << csv_quote(key.second) << "," << vals[0].size() << ","
      << vals[1].size() << "," << vals[2].size() << "," << mean_of(vals[0]) << ","
      << mean_of(vals[1]) << "," << mean_of(vals[2]) << "\n";
  }
  s.fairness_csv = f.str();
  return s;
}

GridConfig parse_grid_config(const std::string& text, const std::string& origin) {
  GridConfig cfg;
  bool saw_seed = false;
  int lineno = 0;
  for (const std::string& raw : split(text, '\n')) {
    ++lineno;
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(origin + ":" + std::to_string(lineno) +
                               ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    auto where = [&] { return origin + ":" + std::to_string(lineno) + ": "; };
    try {
      if (key == "n") {
        for (const std::string& t : split(val, ','))
          cfg.grid.n_values.push_back(static_cast<int>(to_int(t, "n")));
      } else if (key == "p") {
        for (const std::string& t : split(val, ','))
          cfg.grid.p_values.push_back(static_cast<int>(to_int(t, "p")));
      } else if (key == "R") {
        for (const std::string& t : split(val, ','))
          cfg.grid.R_values.push_back(to_double(t, "R"));
      } else if (key == "families") {
        for (const std::string& t : split(val, ','))
          cfg.grid.families.push_back(parse_family(trim(t)));
      } else if (key == "alphas") {
        for (const std::string& t : split(val, ','))
          cfg.grid.alphas.push_back(parse_rational(trim(t)));
      } else if (key == "spaces") {
        for (const std::string& t : split(val, ','))
          cfg.grid.spaces.push_back(parse_space(trim(t)));
      } else if (key == "time_limit") {
        cfg.grid.time_limit = to_double(val, "time_limit");
      } else if (key == "seed") {
        cfg.grid.seed = static_cast<std::uint64_t>(to_int(val, "seed"));
        saw_seed = true;
      } else if (key == "threads") {
        cfg.grid.threads = static_cast<int>(to_int(val, "threads"));
      } else if (key == "instance") {
        cfg.instance_path = val;
      } else if (key == "normalize") {
        cfg.normalize = (val == "true" || val == "1");
      } else if (key == "gen_n") {
        cfg.gen_n = static_cast<int>(to_int(val, "gen_n"));
      } else if (key == "gen_d") {
        cfg.gen_d = static_cast<int>(to_int(val, "gen_d"));
      } else if (key == "gen_seed") {
        cfg.gen_seed = static_cast<std::uint64_t>(to_int(val, "gen_seed"));
      } else if (key == "out") {
        cfg.out = val;
      } else {
        throw std::runtime_error("unknown key '" + key + "'");
      }
    } catch (const std::runtime_error& e) {
      throw std::runtime_error(where() + e.what());
    }
  }
  if (!saw_seed) cfg.grid.seed = cfg.gen_seed;
  return cfg;
}

}  // namespace fmclp
