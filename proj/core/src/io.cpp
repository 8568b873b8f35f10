#include "cmv/io.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "cmv/errors.hpp"

namespace cmv {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& text) {
  const std::string t = trim(text);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    throw DomainError("not a number: '" + text + "'");
  }
  if (used != t.size()) throw DomainError("trailing characters in number: '" + text + "'");
  return v;
}

long parse_long(const std::string& text) {
  const std::string t = trim(text);
  std::size_t used = 0;
  long v = 0;
  try {
    v = std::stol(t, &used);
  } catch (const std::exception&) {
    throw DomainError("not an integer: '" + text + "'");
  }
  if (used != t.size()) throw DomainError("trailing characters in integer: '" + text + "'");
  return v;
}

std::string format_complex(cplx c) {
  std::ostringstream os;
  os << std::setprecision(17) << c.real() << (c.imag() < 0 ? "-" : "+") << std::abs(c.imag())
     << 'i';
  return os.str();
}

std::string strip_comment(const std::string& line) {
  const auto p = line.find('#');
  return p == std::string::npos ? line : line.substr(0, p);
}

}  // namespace

cplx parse_complex(const std::string& text) {
  std::string t = trim(text);
  if (t.empty()) throw DomainError("empty complex number");
  if (t.front() == '(' && t.back() == ')') {
    const std::string inner = t.substr(1, t.size() - 2);
    const auto comma = inner.find(',');
    if (comma == std::string::npos) throw DomainError("expected (re,im): '" + text + "'");
    return {parse_double(inner.substr(0, comma)), parse_double(inner.substr(comma + 1))};
  }
  t.erase(std::remove_if(t.begin(), t.end(), [](unsigned char c) { return std::isspace(c); }),
          t.end());
  if (t.back() != 'i' && t.back() != 'j') return {parse_double(t), 0.0};
  t.pop_back();
  // Split at the last sign that is not part of an exponent.
  std::size_t split = std::string::npos;
  for (std::size_t i = t.size(); i-- > 1;) {
    if ((t[i] == '+' || t[i] == '-') && t[i - 1] != 'e' && t[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  const auto imag_part = [](const std::string& s) {
    if (s.empty() || s == "+") return 1.0;
    if (s == "-") return -1.0;
    return parse_double(s);
  };
  if (split == std::string::npos) return {0.0, imag_part(t)};
  return {parse_double(t.substr(0, split)), imag_part(t.substr(split))};
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!trim(item).empty()) out.push_back(parse_double(item));
  }
  if (out.empty()) throw DomainError("empty list: '" + text + "'");
  return out;
}

std::pair<cplx, cplx> parse_alphabet(const std::string& text) {
  // Commas inside parentheses belong to a (re,im) pair.
  int depth = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '(') ++depth;
    if (text[i] == ')') --depth;
    if (text[i] == ',' && depth == 0) {
      return {parse_complex(text.substr(0, i)), parse_complex(text.substr(i + 1))};
    }
  }
  throw DomainError("alphabet needs two letters 'a,b': '" + text + "'");
}

std::string to_string(ModelKind k) {
  switch (k) {
    case ModelKind::free: return "free";
    case ModelKind::constant: return "constant";
    case ModelKind::sturmian: return "sturmian";
    case ModelKind::explicit_file: return "explicit";
  }
  return "unknown";
}

void apply_setting(RunConfig& cfg, const std::string& key_in, const std::string& value) {
  const std::string key = trim(key_in);
  if (key == "model") {
    const std::string v = trim(value);
    if (v == "free") cfg.model = ModelKind::free;
    else if (v == "constant") cfg.model = ModelKind::constant;
    else if (v == "sturmian" || v == "fibonacci") cfg.model = ModelKind::sturmian;
    else if (v == "explicit") cfg.model = ModelKind::explicit_file;
    else throw DomainError("unknown model '" + v + "'");
  } else if (key == "alpha") {
    cfg.alpha = parse_complex(value);
  } else if (key == "alphabet") {
    cfg.alphabet = parse_alphabet(value);
  } else if (key == "omega") {
    cfg.omega = parse_double(value);
  } else if (key == "explicit_file") {
    cfg.explicit_file = trim(value);
  } else if (key == "support") {
    const std::string v = trim(value);
    if (v == "one_sided") cfg.support = Support::one_sided;
    else if (v == "two_sided") cfg.support = Support::two_sided;
    else throw DomainError("support must be one_sided or two_sided");
  } else if (key == "eta_b") {
    cfg.eta_b = parse_complex(value);
  } else if (key == "theta_count") {
    cfg.theta_count = static_cast<int>(parse_long(value));
  } else if (key == "r") {
    cfg.r = parse_double_list(value);
  } else if (key == "eps") {
    cfg.eps = parse_double_list(value);
  } else if (key == "holder_theta") {
    cfg.holder_theta = parse_double_list(value);
  } else if (key == "depth") {
    cfg.depth = static_cast<int>(parse_long(value));
  } else if (key == "window") {
    cfg.window = parse_long(value);
  } else if (key == "n_lo") {
    cfg.n_lo = parse_long(value);
  } else if (key == "n_hi") {
    cfg.n_hi = parse_long(value);
  } else if (key == "steps") {
    cfg.steps = parse_long(value);
  } else if (key == "snapshot_every") {
    cfg.snapshot_every = parse_long(value);
  } else if (key == "seed") {
    cfg.seed = static_cast<std::uint64_t>(parse_long(value));
  } else if (key == "out") {
    cfg.out = trim(value);
  } else {
    throw DomainError("unknown config key '" + key + "'");
  }
}

RunConfig load_config(const std::filesystem::path& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  const std::string head = trim(text);
  if (!head.empty() && head.front() == '{') {
    const nlohmann::json j = nlohmann::json::parse(text);
    for (const auto& [k, v] : j.items()) {
      if (v.is_string()) apply_setting(base, k, v.get<std::string>());
      else if (v.is_array()) {
        std::string joined;
        for (const auto& e : v) {
          if (!joined.empty()) joined += ',';
          joined += e.is_string() ? e.get<std::string>() : e.dump();
        }
        apply_setting(base, k, joined);
      } else {
        apply_setting(base, k, v.dump());
      }
    }
    return base;
  }
  std::stringstream lines(text);
  std::string line;
  int lineno = 0;
  while (std::getline(lines, line)) {
    ++lineno;
    const std::string s = trim(strip_comment(line));
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string::npos) {
      throw DomainError("config line " + std::to_string(lineno) + " is not key=value");
    }
    apply_setting(base, s.substr(0, eq), s.substr(eq + 1));
  }
  return base;
}

void validate(const RunConfig& cfg) {
  const auto in_disk = [](cplx a, const std::string& what) {
    if (!(std::abs(a) < 1.0)) throw ModulusError(what + " must lie in the open unit disk");
  };
  if (cfg.model == ModelKind::constant) in_disk(cfg.alpha, "alpha");
  if (cfg.model == ModelKind::sturmian) {
    in_disk(cfg.alphabet.first, "alphabet letter 1");
    in_disk(cfg.alphabet.second, "alphabet letter 0");
    if (!(cfg.omega > 0.0 && cfg.omega < 1.0)) {
      throw FrequencyRangeError("omega must lie in (0, 1)");
    }
  }
  if (cfg.model == ModelKind::explicit_file && cfg.explicit_file.empty()) {
    throw DomainError("explicit model needs explicit_file");
  }
  if (std::abs(std::abs(cfg.eta_b) - 1.0) > 1e-12) throw ModulusError("eta_b must be unimodular");
  if (cfg.theta_count < 1) throw DomainError("theta_count must be >= 1");
  for (double r : cfg.r) {
    if (!(r > 0.0 && r < 1.0)) throw DomainError("every r must lie in (0, 1)");
  }
  for (double e : cfg.eps) {
    if (!(e > 0.0 && e < 1.0)) throw DomainError("every eps must lie in (0, 1)");
  }
  if (cfg.depth < 1 || cfg.depth > 60) throw DomainError("depth must lie in 1..60");
  if (cfg.window < 0) throw DomainError("window must be >= 0");
  if (cfg.n_hi < cfg.n_lo) throw DomainError("n_hi must be >= n_lo");
  if (cfg.support == Support::one_sided && cfg.n_lo < 0) {
    throw SupportError("one-sided models have no negative indices");
  }
  if (cfg.steps < 0) throw DomainError("steps must be >= 0");
  if (cfg.snapshot_every < 1) throw DomainError("snapshot_every must be >= 1");
}

VerblunskySequence make_model(const RunConfig& cfg) {
  validate(cfg);
  switch (cfg.model) {
    case ModelKind::free: return make_constant(0.0, cfg.support);
    case ModelKind::constant: return make_constant(cfg.alpha, cfg.support);
    case ModelKind::sturmian:
      return make_sturmian(cfg.alphabet.first, cfg.alphabet.second, cfg.omega, cfg.support);
    case ModelKind::explicit_file: {
      std::ifstream in(cfg.explicit_file);
      if (!in) throw std::runtime_error("cannot open " + cfg.explicit_file);
      std::string line;
      std::vector<std::pair<long, cplx>> rows;
      while (std::getline(in, line)) {
        const std::string s = trim(line);
        if (s.empty() || !(std::isdigit(static_cast<unsigned char>(s[0])) || s[0] == '-')) continue;
        std::stringstream ss(s);
        std::string n, re, im;
        std::getline(ss, n, ',');
        std::getline(ss, re, ',');
        std::getline(ss, im, ',');
        rows.emplace_back(parse_long(n), cplx{parse_double(re), im.empty() ? 0.0 : parse_double(im)});
      }
      if (rows.empty()) throw InsufficientDataError("explicit file has no coefficient rows");
      std::sort(rows.begin(), rows.end(), [](auto& a, auto& b) { return a.first < b.first; });
      const long first = rows.front().first;
      std::vector<cplx> values(static_cast<std::size_t>(rows.back().first - first + 1));
      for (const auto& [n, a] : rows) values[static_cast<std::size_t>(n - first)] = a;
      return make_explicit(std::move(values), first, cfg.support);
    }
  }
  throw DomainError("unknown model");
}

std::string config_json(const RunConfig& cfg) {
  nlohmann::json j;
  j["model"] = to_string(cfg.model);
  j["alpha"] = format_complex(cfg.alpha);
  j["alphabet"] = format_complex(cfg.alphabet.first) + "," + format_complex(cfg.alphabet.second);
  j["omega"] = cfg.omega;
  j["explicit_file"] = cfg.explicit_file;
  j["support"] = cfg.support == Support::one_sided ? "one_sided" : "two_sided";
  j["eta_b"] = format_complex(cfg.eta_b);
  j["theta_count"] = cfg.theta_count;
  j["r"] = cfg.r;
  j["eps"] = cfg.eps;
  j["holder_theta"] = cfg.holder_theta;
  j["depth"] = cfg.depth;
  j["window"] = cfg.window;
  j["n_lo"] = cfg.n_lo;
  j["n_hi"] = cfg.n_hi;
  j["steps"] = cfg.steps;
  j["snapshot_every"] = cfg.snapshot_every;
  j["seed"] = cfg.seed;
  j["out"] = cfg.out;
  return j.dump(2);
}

std::filesystem::path make_run_directory(const std::filesystem::path& base,
                                         const std::string& command) {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream stamp;
  stamp << std::put_time(&tm, "%Y%m%dT%H%M%SZ");
  std::filesystem::create_directories(base);
  std::filesystem::path dir = base / (command + "-" + stamp.str());
  for (int k = 1; std::filesystem::exists(dir); ++k) {
    dir = base / (command + "-" + stamp.str() + "-" + std::to_string(k));
  }
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace cmv
