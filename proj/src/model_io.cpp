#include "hamspray/model_io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "hamspray/parser.hpp"

namespace hamspray {

using nlohmann::json;

namespace {

bool is_identifier(const std::string& s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  return !func_from_name(s) && s != "sqrt";
}

const json& require(const json& doc, const std::string& key) {
  if (!doc.contains(key)) throw SchemaError("/" + key, "missing field");
  return doc[key];
}

int to_int(const json& v, const std::string& path) {
  if (!v.is_number_integer()) throw SchemaError(path, "expected an integer");
  return v.get<int>();
}

double to_double(const json& v, const std::string& path) {
  if (!v.is_number()) throw SchemaError(path, "expected a number");
  return v.get<double>();
}

std::vector<Symbol> names(const json& v, const std::string& path, int count) {
  if (!v.is_array()) throw SchemaError(path, "expected an array of names");
  if (static_cast<int>(v.size()) != count)
    throw SchemaError(path, "expected " + std::to_string(count) + " names");
  std::vector<Symbol> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::string p = path + "/" + std::to_string(i);
    if (!v[i].is_string() || !is_identifier(v[i].get<std::string>())) throw SchemaError(p, "invalid name");
    out.emplace_back(v[i].get<std::string>());
  }
  return out;
}

// Splits "a,b,c" into 1-based indices in [1, bound].
std::vector<int> index_key(const std::string& key, std::size_t arity, int bound, const std::string& path) {
  std::vector<int> out;
  std::stringstream ss(key);
  std::string part;
  while (std::getline(ss, part, ',')) {
    try {
      std::size_t used = 0;
      int v = std::stoi(part, &used);
      if (used != part.size()) throw std::invalid_argument(part);
      out.push_back(v);
    } catch (const std::exception&) {
      throw SchemaError(path, "malformed index key '" + key + "'");
    }
  }
  if (out.size() != arity) throw SchemaError(path, "malformed index key '" + key + "'");
  for (int v : out)
    if (v < 1 || v > bound) throw SchemaError(path, "index out of range in '" + key + "'");
  return out;
}

std::string json_pointer_token(const std::string& key) {
  std::string out;
  for (char c : key) {
    if (c == '~') out += "~0";
    else if (c == '/') out += "~1";
    else out += c;
  }
  return out;
}

struct ExprReader {
  std::vector<Symbol> alphabet;
  Substitution params;

  Expr operator()(const json& v, const std::string& path) const {
    std::string text;
    if (v.is_string()) text = v.get<std::string>();
    else if (v.is_number()) text = v.dump();
    else throw SchemaError(path, "expected an expression string");
    try {
      Expr e = parse(text, alphabet);
      return params.empty() ? e : substitute(e, params);
    } catch (const UnknownSymbol& u) {
      throw SchemaError(path, "unknown symbol '" + u.name() + "'");
    } catch (const SyntaxError& s) {
      throw SchemaError(path, s.what());
    }
  }
};

}  // namespace

std::vector<Symbol> Model::alphabet() const {
  auto out = chart.coords();
  for (const auto& [name, value] : params) out.emplace_back(name);
  return out;
}

Model read_model(const json& doc) {
  if (!doc.is_object()) throw SchemaError("/", "expected an object");
  static const std::set<std::string> known{"n", "r", "coords", "fibers", "rho", "C", "L", "Theta",
                                           "f", "params", "box", "seed", "tolerances"};
  for (const auto& [key, value] : doc.items())
    if (!known.count(key)) throw SchemaError("/" + json_pointer_token(key), "unknown field");

  const int n = to_int(require(doc, "n"), "/n");
  const int r = to_int(require(doc, "r"), "/r");
  if (n < 1 || r < 1) throw SchemaError(n < 1 ? "/n" : "/r", "must be positive");
  auto x = names(require(doc, "coords"), "/coords", n);
  auto y = names(require(doc, "fibers"), "/fibers", r);

  Model m;
  ExprReader read;
  read.alphabet = x;
  read.alphabet.insert(read.alphabet.end(), y.begin(), y.end());
  std::set<std::string> seen;
  for (std::size_t i = 0; i < read.alphabet.size(); ++i)
    if (!seen.insert(read.alphabet[i].name()).second)
      throw SchemaError(i < x.size() ? "/coords" : "/fibers", "duplicate name '" + read.alphabet[i].name() + "'");

  if (doc.contains("params")) {
    const json& p = doc["params"];
    if (!p.is_object()) throw SchemaError("/params", "expected an object");
    ExprReader constant;
    for (const auto& [name, value] : p.items()) {
      const std::string path = "/params/" + json_pointer_token(name);
      if (!is_identifier(name)) throw SchemaError(path, "invalid name");
      if (!seen.insert(name).second) throw SchemaError(path, "name clashes with a coordinate");
      Expr e = constant(value, path);
      if (!e.is_const()) throw SchemaError(path, "parameter must be a rational constant");
      m.params.emplace_back(name, e.value());
      Symbol s(name);
      read.alphabet.push_back(s);
      read.params[s.id()] = e;
    }
  }

  m.chart = AlgebroidChart(x, y);
  const json& rho = require(doc, "rho");
  if (!rho.is_array() || static_cast<int>(rho.size()) != n) throw SchemaError("/rho", "expected " + std::to_string(n) + " rows");
  for (int i = 0; i < n; ++i) {
    const std::string row = "/rho/" + std::to_string(i);
    if (!rho[i].is_array() || static_cast<int>(rho[i].size()) != r)
      throw SchemaError(row, "expected " + std::to_string(r) + " entries");
    for (int j = 0; j < r; ++j) {
      const std::string path = row + "/" + std::to_string(j);
      try {
        m.chart.set_rho(i, j, read(rho[i][j], path));
      } catch (const SchemaError&) {
        throw;
      } catch (const Error& e) {
        throw SchemaError(path, e.what());
      }
    }
  }

  if (doc.contains("C")) {
    const json& C = doc["C"];
    if (!C.is_object()) throw SchemaError("/C", "expected an object");
    for (const auto& [key, value] : C.items()) {
      const std::string path = "/C/" + json_pointer_token(key);
      auto idx = index_key(key, 3, r, path);
      if (idx[1] >= idx[2]) throw SchemaError(path, "requires i < j");
      try {
        m.chart.set_C(idx[0] - 1, idx[1] - 1, idx[2] - 1, read(value, path));
      } catch (const SchemaError&) {
        throw;
      } catch (const Error& e) {
        throw SchemaError(path, e.what());
      }
    }
  }

  if (doc.contains("L")) m.L = read(doc["L"], "/L");
  if (doc.contains("f")) m.f = read(doc["f"], "/f");
  if (doc.contains("Theta")) {
    const json& T = doc["Theta"];
    if (!T.is_object()) throw SchemaError("/Theta", "expected an object");
    AForm theta(r, 2);
    for (const auto& [key, value] : T.items()) {
      const std::string path = "/Theta/" + json_pointer_token(key);
      auto idx = index_key(key, 2, r, path);
      if (idx[0] >= idx[1]) throw SchemaError(path, "requires i < j");
      Expr e = read(value, path);
      for (auto s : y)
        if (depends_on(e, s)) throw SchemaError(path, "depends on fiber coordinate '" + s.name() + "'");
      theta.set({idx[0] - 1, idx[1] - 1}, e);
    }
    m.theta = theta;
  }

  if (doc.contains("box")) {
    const json& b = doc["box"];
    auto pair = [](const json& v, const std::string& path) {
      if (!v.is_array() || v.size() != 2) throw SchemaError(path, "expected [lo, hi]");
      double lo = to_double(v[0], path + "/0"), hi = to_double(v[1], path + "/1");
      if (!(lo < hi)) throw SchemaError(path, "requires lo < hi");
      return std::pair{lo, hi};
    };
    if (b.is_array()) {
      std::tie(m.box.lo, m.box.hi) = pair(b, "/box");
    } else if (b.is_object()) {
      for (const auto& [key, value] : b.items())
        if (key != "range" && key != "overrides") throw SchemaError("/box/" + json_pointer_token(key), "unknown field");
      if (b.contains("range")) std::tie(m.box.lo, m.box.hi) = pair(b["range"], "/box/range");
      if (b.contains("overrides")) {
        if (!b["overrides"].is_object()) throw SchemaError("/box/overrides", "expected an object");
        for (const auto& [name, value] : b["overrides"].items()) {
          const std::string path = "/box/overrides/" + json_pointer_token(name);
          auto coords = m.chart.coords();
          auto it = std::find_if(coords.begin(), coords.end(), [&](Symbol s) { return s.name() == name; });
          if (it == coords.end()) throw SchemaError(path, "unknown symbol '" + name + "'");
          auto [lo, hi] = pair(value, path);
          m.box.set(*it, lo, hi);
        }
      }
    } else {
      throw SchemaError("/box", "expected [lo, hi] or an object");
    }
  }

  if (doc.contains("seed")) {
    const json& seed = doc["seed"];
    if (!seed.is_number_integer() || (!seed.is_number_unsigned() && seed.get<std::int64_t>() < 0)) throw SchemaError("/seed", "expected a non-negative integer");
    m.seed = doc["seed"].get<std::uint64_t>();
  }
  if (doc.contains("tolerances")) {
    const json& t = doc["tolerances"];
    if (!t.is_object()) throw SchemaError("/tolerances", "expected an object");
    for (const auto& [key, value] : t.items()) {
      const std::string path = "/tolerances/" + json_pointer_token(key);
      if (key == "tol") {
        m.tolerances.tol = to_double(value, path);
        if (!(*m.tolerances.tol > 0)) throw SchemaError(path, "must be positive");
      } else if (key == "trials") {
        m.tolerances.trials = to_int(value, path);
        if (*m.tolerances.trials < 1) throw SchemaError(path, "must be positive");
      } else {
        throw SchemaError(path, "unknown field");
      }
    }
  }
  return m;
}

Expr parse_expr(const Model& m, std::string_view text, const std::string& path) {
  ExprReader read;
  read.alphabet = m.alphabet();
  for (const auto& [name, value] : m.params) read.params[Symbol(name).id()] = Expr(value);
  return read(json(std::string(text)), path);
}

Model parse_model(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError("/", e.what());
  }
  return read_model(doc);
}

Model read_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("/", "cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_model(ss.str());
}

json write_model(const Model& m) {
  const auto& A = m.chart;
  json doc;
  doc["n"] = A.n();
  doc["r"] = A.r();
  doc["coords"] = json::array();
  for (auto s : A.x()) doc["coords"].push_back(s.name());
  doc["fibers"] = json::array();
  for (auto s : A.y()) doc["fibers"].push_back(s.name());
  doc["rho"] = json::array();
  for (int i = 0; i < A.n(); ++i) {
    json row = json::array();
    for (int j = 0; j < A.r(); ++j) row.push_back(to_string(A.rho(i, j)));
    doc["rho"].push_back(row);
  }
  doc["C"] = json::object();
  for (int k = 0; k < A.r(); ++k)
    for (int i = 0; i < A.r(); ++i)
      for (int j = i + 1; j < A.r(); ++j)
        if (!A.C(k, i, j).is_literal_zero())
          doc["C"][std::to_string(k + 1) + "," + std::to_string(i + 1) + "," + std::to_string(j + 1)] =
              to_string(A.C(k, i, j));
  if (m.L) doc["L"] = to_string(*m.L);
  if (m.f) doc["f"] = to_string(*m.f);
  if (m.theta) {
    doc["Theta"] = json::object();
    for (std::size_t s = 0; s < m.theta->size(); ++s) {
      if ((*m.theta)[s].is_literal_zero()) continue;
      auto t = m.theta->tuple(s);
      doc["Theta"][std::to_string(t[0] + 1) + "," + std::to_string(t[1] + 1)] = to_string((*m.theta)[s]);
    }
  }
  if (!m.params.empty()) {
    doc["params"] = json::object();
    for (const auto& [name, value] : m.params) doc["params"][name] = to_string(Expr(value));
  }
  json box;
  box["range"] = {m.box.lo, m.box.hi};
  json over = json::object();
  for (auto s : A.coords())
    if (auto it = m.box.overrides.find(s.id()); it != m.box.overrides.end())
      over[s.name()] = {it->second.first, it->second.second};
  if (!over.empty()) box["overrides"] = over;
  doc["box"] = box;
  if (m.seed) doc["seed"] = *m.seed;
  if (m.tolerances.tol || m.tolerances.trials) {
    json t = json::object();
    if (m.tolerances.tol) t["tol"] = *m.tolerances.tol;
    if (m.tolerances.trials) t["trials"] = *m.tolerances.trials;
    doc["tolerances"] = t;
  }
  return doc;
}

std::string dump_model(const Model& m) { return write_model(m).dump(2) + "\n"; }

Model model_from_fixture(const Fixture& f) {
  Model m;
  m.chart = f.chart;
  m.L = f.L;
  if (!f.theta.is_literal_zero()) m.theta = f.theta;
  return m;
}

}  // namespace hamspray
