#include "fmclp/instance_io.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace fmclp {

namespace {

std::string num_str(double v) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, r.ptr);
}

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t");
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

[[noreturn]] void fail_at(const std::string& origin, int line, int col, const std::string& msg) {
  std::ostringstream os;
  os << origin << ":" << line << ":" << col << ": " << msg;
  throw std::runtime_error(os.str());
}

double parse_field(const std::string& raw, const std::string& origin, int line, int col,
                   const char* what) {
  std::string f = trim(raw);
  if (f.empty()) fail_at(origin, line, col, std::string("empty ") + what + " field");
  double v = 0;
  auto r = std::from_chars(f.data(), f.data() + f.size(), v);
  if (r.ec != std::errc{} || r.ptr != f.data() + f.size())
    fail_at(origin, line, col, std::string("cannot parse ") + what + " value '" + f + "'");
  if (!std::isfinite(v))
    fail_at(origin, line, col, std::string(what) + " value must be finite");
  return v;
}

std::string norm_str(const NormSpec& n) {
  switch (n.kind) {
    case NormSpec::Kind::Euclidean: return "euclidean";
    case NormSpec::Kind::L1: return "l1";
    case NormSpec::Kind::LInf: return "linf";
    case NormSpec::Kind::LTau: return "ltau " + num_str(n.tau);
  }
  throw std::logic_error("norm_str");
}

NormSpec parse_norm(const std::string& s) {
  if (s == "euclidean") return NormSpec::euclidean();
  if (s == "l1") return NormSpec::l1();
  if (s == "linf") return NormSpec::linf();
  if (s.rfind("ltau ", 0) == 0) return NormSpec::ltau(std::stod(s.substr(5)));
  throw std::runtime_error("unknown norm '" + s + "'");
}

std::string coord_name(int c, int d) {
  if (d <= 3) return std::string(1, "xyz"[c]);
  return "x" + std::to_string(c + 1);
}

}  // namespace

Instance parse_instance_csv(const std::string& text, const LoadOptions& opts,
                            const std::string& origin) {
  Instance inst;
  auto lines = split(text, '\n');
  int lineno = 0;
  int d = -1;
  bool saw_header = false;
  for (const std::string& raw : lines) {
    ++lineno;
    std::string line = raw;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    if (line[0] == '#') {
      std::string c = trim(line.substr(1));
      if (c.rfind("name:", 0) == 0) inst.name = trim(c.substr(5));
      else if (c.rfind("seed:", 0) == 0) inst.seed = std::stoull(trim(c.substr(5)));
      else if (c.rfind("normalized:", 0) == 0) inst.normalized = trim(c.substr(11)) == "true";
      else if (c.rfind("norm:", 0) == 0) inst.norm = parse_norm(trim(c.substr(5)));
      continue;
    }
    auto fields = split(line, ',');
    if (!saw_header) {
      if (fields.size() < 2) fail_at(origin, lineno, 1, "header needs coordinates and a w column");
      if (trim(fields.back()) != "w")
        fail_at(origin, lineno, 1, "last header column must be 'w'");
      d = static_cast<int>(fields.size()) - 1;
      saw_header = true;
      continue;
    }
    if (static_cast<int>(fields.size()) != d + 1) {
      std::ostringstream os;
      os << "expected " << d + 1 << " fields, got " << fields.size();
      fail_at(origin, lineno, 1, os.str());
    }
    std::vector<double> coords(d);
    std::size_t col = 1;
    for (int c = 0; c <= d; ++c) {
      const bool is_w = (c == d);
      double v = parse_field(fields[c], origin, lineno, static_cast<int>(col),
                             is_w ? "weight" : "coordinate");
      if (is_w) {
        if (v < 0) fail_at(origin, lineno, static_cast<int>(col), "negative weight rejected");
        inst.weights.push_back(v);
      } else {
        coords[c] = v;
      }
      col += fields[c].size() + 1;
    }
    inst.points.emplace_back(std::move(coords));
  }
  if (!saw_header) throw std::runtime_error(origin + ": no header line found");
  if (inst.points.empty()) throw std::runtime_error(origin + ": no demand rows");

  if (opts.normalize) {
    for (int c = 0; c < d; ++c) {
      double lo = inst.points[0][c], hi = lo;
      for (const auto& pt : inst.points) {
        lo = std::min(lo, pt[c]);
        hi = std::max(hi, pt[c]);
      }
      const double range = hi - lo;
      for (auto& pt : inst.points)
        pt[c] = range > 0 ? std::clamp((pt[c] - lo) / range, 0.0, 1.0) : 0.5;
    }
    inst.normalized = true;
  }
  if (opts.max_points > 0 && static_cast<int>(inst.points.size()) > opts.max_points) {
    inst.points.resize(opts.max_points);
    inst.weights.resize(opts.max_points);
  }
  inst.candidates = inst.points;
  inst.validate();
  return inst;
}

Instance load_instance(const std::string& path, const LoadOptions& opts) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open instance file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_instance_csv(buf.str(), opts, path);
}

std::string instance_to_csv(const Instance& inst) {
  const int d = static_cast<int>(inst.dim());
  std::ostringstream os;
  if (!inst.name.empty()) os << "# name: " << inst.name << "\n";
  os << "# seed: " << inst.seed << "\n";
  os << "# normalized: " << (inst.normalized ? "true" : "false") << "\n";
  os << "# norm: " << norm_str(inst.norm) << "\n";
  for (int c = 0; c < d; ++c) os << coord_name(c, d) << ",";
  os << "w\n";
  for (std::size_t i = 0; i < inst.size(); ++i) {
    for (int c = 0; c < d; ++c) os << num_str(inst.points[i][c]) << ",";
    os << num_str(inst.weights[i]) << "\n";
  }
  return os.str();
}

void save_instance(const Instance& inst, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write instance file '" + path + "'");
  out << instance_to_csv(inst);
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

Instance gen_instance(int n, int d, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("gen_instance: n must be >= 1");
  if (d < 1) throw std::invalid_argument("gen_instance: d must be >= 1");
  std::mt19937_64 rng(seed);
  auto u01 = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  Instance inst;
  inst.points.reserve(n);
  inst.weights.reserve(n);
  for (int i = 0; i < n; ++i) {
    std::vector<double> coords(d);
    for (int c = 0; c < d; ++c) coords[c] = u01();
    inst.points.emplace_back(std::move(coords));
    double w;
    do { w = u01(); } while (w == 0.0);  // weights live in the open interval
    inst.weights.push_back(w);
  }
  inst.candidates = inst.points;
  inst.norm = NormSpec::euclidean();
  inst.normalized = true;
  inst.seed = seed;
  std::ostringstream name;
  name << "gen-n" << n << "-d" << d << "-s" << seed;
  inst.name = name.str();
  inst.validate();
  return inst;
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("sha256: digest failure");
  static const char* hex = "0123456789abcdef";
  std::string out(len * 2, '0');
  for (unsigned int i = 0; i < len; ++i) {
    out[2 * i] = hex[md[i] >> 4];
    out[2 * i + 1] = hex[md[i] & 0xf];
  }
  return out;
}

std::string instance_hash(const Instance& inst) {
  std::ostringstream os;
  os << "fmclp-instance-v1\n";
  os << "norm " << norm_str(inst.norm) << "\n";
  os << "n " << inst.size() << " d " << inst.dim() << "\n";
  for (std::size_t i = 0; i < inst.size(); ++i) {
    os << "p";
    for (std::size_t c = 0; c < inst.dim(); ++c) os << " " << num_str(inst.points[i][c]);
    os << " w " << num_str(inst.weights[i]) << "\n";
  }
  os << "m " << inst.candidates.size() << "\n";
  for (const auto& b : inst.candidates) {
    os << "c";
    for (std::size_t c = 0; c < b.dim(); ++c) os << " " << num_str(b[c]);
    os << "\n";
  }
  return sha256_hex(os.str());
}

}  // namespace fmclp
