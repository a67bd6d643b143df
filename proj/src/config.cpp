#include "nambu/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "nambu/experiments.hpp"

namespace nambu {

using nlohmann::json;

void to_json(json& j, const RunConfig& c) {
  j = json{{"geometry", c.geometry}, {"theorems", c.theorems}, {"ks", c.ks},
           {"seeds", c.seeds},       {"max_freq", c.max_freq}, {"symbols", c.symbols},
           {"grid", c.grid},         {"norm_tol", c.norm_tol}, {"max_iter", c.max_iter},
           {"output_dir", c.output_dir}, {"workers", c.workers}};
}

void from_json(const json& j, RunConfig& c) {
  static const char* known[] = {"geometry", "theorems", "ks",       "seeds",      "max_freq", "symbols",
                                "grid",     "norm_tol", "max_iter", "output_dir", "workers"};
  for (const auto& [key, _] : j.items())
    if (std::find(std::begin(known), std::end(known), key) == std::end(known))
      throw UsageError("unknown config key '" + key + "'");
  RunConfig d;
  c.geometry = j.value("geometry", d.geometry);
  c.theorems = j.value("theorems", d.theorems);
  // ks may be a list or a range string
  if (j.contains("ks") && j["ks"].is_string())
    c.ks = parse_k_range(j["ks"].get<std::string>());
  else
    c.ks = j.value("ks", d.ks);
  c.seeds = j.value("seeds", d.seeds);
  c.max_freq = j.value("max_freq", d.max_freq);
  c.symbols = j.value("symbols", d.symbols);
  c.grid = j.value("grid", d.grid);
  c.norm_tol = j.value("norm_tol", d.norm_tol);
  c.max_iter = j.value("max_iter", d.max_iter);
  c.output_dir = j.value("output_dir", d.output_dir);
  c.workers = j.value("workers", d.workers);
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config '" + path + "'");
  try {
    return json::parse(in).get<RunConfig>();
  } catch (const json::exception& e) {
    throw UsageError("config '" + path + "': " + e.what());
  }
}

void save_config(const std::string& path, const RunConfig& c) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write config '" + path + "'");
  out << json(c).dump(2) << '\n';
}

namespace {

int to_int(const std::string& s, const std::string& what) {
  int v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) throw UsageError("bad " + what + " '" + s + "'");
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, sep)) out.push_back(part);
  return out;
}

FourierSymbol symbol_from_json(const json& j, int dim) {
  if (!j.is_array()) throw UsageError("coefficient list must be a JSON array");
  std::vector<FourierSymbol::Term> terms;
  for (const auto& rec : j) {
    if (!rec.is_object() || !rec.contains("m")) throw UsageError("coefficient record needs an 'm' field");
    const auto m = rec["m"].get<std::vector<int>>();
    if (static_cast<int>(m.size()) != dim)
      throw UsageError("frequency " + rec["m"].dump() + " does not match dimension " + std::to_string(dim));
    Freq f{};
    std::copy(m.begin(), m.end(), f.begin());
    terms.push_back({f, cplx(rec.value("re", 0.0), rec.value("im", 0.0))});
  }
  return FourierSymbol(dim, std::move(terms));
}

}  // namespace

std::vector<int> parse_k_range(const std::string& text) {
  std::vector<int> ks;
  if (text.find(':') != std::string::npos) {
    const auto p = split(text, ':');
    if (p.size() < 2 || p.size() > 3) throw UsageError("k range must be start:stop[:step]");
    const int a = to_int(p[0], "k"), b = to_int(p[1], "k"), step = p.size() == 3 ? to_int(p[2], "k step") : 1;
    if (step < 1) throw UsageError("k step must be positive");
    for (int k = a; k <= b; k += step) ks.push_back(k);
  } else {
    for (const auto& s : split(text, ',')) ks.push_back(to_int(s, "k"));
  }
  if (ks.empty()) throw UsageError("empty k range '" + text + "'");
  for (int k : ks)
    if (k < 1) throw UsageError("levels must be positive");
  return ks;
}

FourierSymbol parse_symbol_spec(const std::string& spec, int dim) {
  if (spec.empty()) throw UsageError("empty symbol spec");
  try {
    if (spec[0] == '@') {
      std::ifstream in(spec.substr(1));
      if (!in) throw UsageError("cannot read symbol file '" + spec.substr(1) + "'");
      std::stringstream ss;
      ss << in.rdbuf();
      std::string body = ss.str();
      while (!body.empty() && std::isspace(static_cast<unsigned char>(body.back()))) body.pop_back();
      return parse_symbol_spec(body, dim);
    }
    if (spec[0] == '[') return symbol_from_json(json::parse(spec), dim);
    if (spec.rfind("random:", 0) == 0) {
      const auto p = split(spec, ':');
      if (p.size() < 2 || p.size() > 3) throw UsageError("random spec is random:SEED[:MAXF]");
      const auto seed = static_cast<std::uint64_t>(to_int(p[1], "seed"));
      const int mf = p.size() == 3 ? to_int(p[2], "max frequency") : 2;
      if (mf < 1) throw UsageError("max frequency must be at least 1");
      return random_symbol(seed, dim, mf, true);
    }
    return preset_symbol(spec, dim);
  } catch (const UsageError&) {
    throw;
  } catch (const json::exception& e) {
    throw UsageError("symbol spec: " + std::string(e.what()));
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
}

void validate(const RunConfig& c) {
  if (!c.geometry.empty()) {
    try {
      geometry_preset(c.geometry);
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
  }
  for (const auto& id : c.theorems) {
    try {
      theorem_info(id);
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
  }
  for (int k : c.ks)
    if (k < 1) throw UsageError("levels must be positive");
  if (c.symbols.empty() && c.seeds.empty()) throw UsageError("no seeds and no explicit symbols");
  if (c.max_freq < 1) throw UsageError("max frequency must be at least 1");
  if (c.grid < 0) throw UsageError("grid override must be non-negative");
  if (!(c.norm_tol > 0.0)) throw UsageError("norm tolerance must be positive");
  if (c.max_iter < 1) throw UsageError("max iterations must be positive");
  if (c.workers < 1) throw UsageError("worker count must be positive");
  if (c.output_dir.empty()) throw UsageError("empty output directory");
}

}  // namespace nambu
