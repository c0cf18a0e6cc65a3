// SPDX-License-Identifier: Apache-2.0
#include "mdlseq/class_config.hpp"

#include <fstream>
#include <sstream>
#include <vector>

#include "mdlseq/errors.hpp"

namespace mdlseq {

namespace {

struct Stanza {
  std::string header;  // "" for the top-level block, else "model NAME" etc.
  std::vector<std::pair<std::string, std::string>> pairs;  // order preserved

  const std::string* find(const std::string& key) const {
    const std::string* hit = nullptr;
    for (const auto& [k, v] : pairs) {
      if (k == key) {
        if (hit) return nullptr;  // caller treats duplicates as errors
        hit = &v;
      }
    }
    return hit;
  }

  std::string require(const std::string& key) const {
    for (const auto& [k, v] : pairs) {
      if (k == key) return v;
    }
    throw ValidationError("stanza [" + header + "] missing key '" + key + "'");
  }

  bool has(const std::string& key) const {
    for (const auto& [k, v] : pairs) {
      if (k == key) return true;
    }
    return false;
  }
};

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

int parse_int(const std::string& value, const std::string& field) {
  try {
    std::size_t pos = 0;
    const int v = std::stoi(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ValidationError(field + ": expected an integer, got '" + value +
                          "'");
  }
}

std::vector<Stanza> tokenize(const std::string& text) {
  std::vector<Stanza> stanzas;
  stanzas.push_back(Stanza{});  // top-level block
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ValidationError("line " + std::to_string(lineno) +
                              ": unterminated stanza header");
      }
      stanzas.push_back(Stanza{trim(line.substr(1, line.size() - 2)), {}});
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ValidationError("line " + std::to_string(lineno) +
                            ": expected key = value");
    }
    stanzas.back().pairs.emplace_back(trim(line.substr(0, eq)),
                                      trim(line.substr(eq + 1)));
  }
  return stanzas;
}

std::vector<Rational> parse_rational_row(const std::string& value,
                                         const std::string& field) {
  std::vector<Rational> row;
  for (const auto& tok : split_ws(value)) {
    try {
      row.push_back(parse_rational(tok));
    } catch (const ValidationError& e) {
      throw ValidationError(field + ": " + e.what());
    }
  }
  return row;
}

ModelSpec parse_model_spec(const Stanza& st, const Alphabet& alphabet) {
  const std::string kind = st.require("kind");
  if (kind == "iid") {
    IidSpec spec;
    spec.theta = parse_rational_row(st.require("theta"), "theta");
    return spec;
  }
  if (kind == "deterministic") {
    DeterministicSpec spec;
    spec.prefix = parse_symbols(st.require("prefix"), alphabet);
    spec.period = parse_symbols(st.require("period"), alphabet);
    return spec;
  }
  if (kind == "factorizable") {
    FactorizableSpec spec;
    for (const auto& [k, v] : st.pairs) {
      if (k == "step") {
        spec.steps.push_back(parse_rational_row(v, "step"));
      }
    }
    if (st.has("generator")) {
      const std::string g = st.require("generator");
      if (g == "oscillating-mu") {
        spec.generator = StepGenerator::OscillatingMu;
      } else if (g == "oscillating-nu") {
        spec.generator = StepGenerator::OscillatingNu;
      } else {
        throw ValidationError("unknown generator '" + g + "'");
      }
    }
    if (st.has("tail")) {
      spec.tail = parse_rational_row(st.require("tail"), "tail");
    }
    return spec;
  }
  if (kind == "tabular") {
    TabularSpec spec;
    for (const auto& [k, v] : st.pairs) {
      if (k != "node") continue;
      const auto toks = split_ws(v);
      if (toks.size() != 2) {
        throw ValidationError("node: expected '<path> <value>', got '" + v +
                              "'");
      }
      SymbolString path;
      if (toks[0] != ".") path = parse_symbols(toks[0], alphabet);
      spec.nodes.emplace_back(std::move(path), parse_rational(toks[1]));
    }
    return spec;
  }
  throw ValidationError("unknown model kind '" + kind + "'");
}

Rational parse_weight(const Stanza& st) {
  Rational w;
  try {
    w = parse_rational(st.require("weight"));
  } catch (const ValidationError& e) {
    throw ValidationError(std::string("weight: ") + e.what());
  }
  if (w <= 0) {
    throw ValidationError("weight must be positive, got " +
                          format_rational(w));
  }
  return w;
}

void expand_generate(const Stanza& st, const Alphabet& alphabet,
                     std::vector<ClassEntry>& entries) {
  const std::string family = st.require("family");
  if (family != "example-lowerbound") {
    throw ValidationError("unknown generator family '" + family + "'");
  }
  if (alphabet.size != 2) {
    throw ValidationError("example-lowerbound requires a binary alphabet");
  }
  const int n = parse_int(st.require("n"), "n");
  if (n < 2) throw ValidationError("example-lowerbound needs n >= 2");
  const Rational w(1, n);
  for (int i = 1; i <= n - 1; ++i) {
    DeterministicSpec spec;
    spec.prefix.assign(static_cast<std::size_t>(i - 1), 1);
    spec.period = {0};
    entries.push_back(ClassEntry{"nu" + std::to_string(i),
                                 build_model(alphabet, spec), w,
                                 log_rational(w)});
  }
  DeterministicSpec mu;
  mu.period = {1};
  entries.push_back(
      ClassEntry{"mu", build_model(alphabet, mu), w, log_rational(w)});
}

}  // namespace

WeightedClass parse_class_config(const std::string& text) {
  const auto stanzas = tokenize(text);
  const Stanza& top = stanzas.front();

  const std::string* alpha = top.find("alphabet");
  const Alphabet alphabet(alpha ? parse_int(*alpha, "alphabet") : 2);

  TieBreak tb = TieBreak::WeightThenIndex;
  if (const std::string* s = top.find("tie-break")) tb = parse_tie_break(*s);

  std::vector<ClassEntry> entries;
  for (std::size_t i = 1; i < stanzas.size(); ++i) {
    const Stanza& st = stanzas[i];
    const auto toks = split_ws(st.header);
    if (toks.size() == 2 && toks[0] == "model") {
      const std::string& name = toks[1];
      for (const auto& e : entries) {
        if (e.name == name) {
          throw ValidationError("duplicate model name '" + name + "'");
        }
      }
      ModelSpec spec;
      try {
        spec = parse_model_spec(st, alphabet);
      } catch (const ValidationError& e) {
        throw ValidationError("model '" + name + "': " + e.what());
      }
      const Rational w = parse_weight(st);
      entries.push_back(ClassEntry{name, build_model(alphabet, spec), w,
                                   log_rational(w)});
    } else if (st.header == "generate") {
      expand_generate(st, alphabet, entries);
    } else {
      throw ValidationError("unknown stanza [" + st.header + "]");
    }
  }

  if (!top.has("true")) {
    throw ValidationError("missing true model (top-level 'true = NAME')");
  }
  const std::string true_name = top.require("true");
  std::optional<std::size_t> true_index;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].name == true_name) true_index = i;
  }
  if (!true_index) {
    throw ValidationError("true model '" + true_name + "' not defined");
  }
  return WeightedClass(alphabet, std::move(entries), true_index, tb);
}

WeightedClass load_class_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open class config '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_class_config(buf.str());
}

namespace {

void render_model(std::ostringstream& out, const ClassEntry& e) {
  out << "\n[model " << e.name << "]\n";
  const ModelSpec& spec = e.model.spec();
  if (const auto* iid = std::get_if<IidSpec>(&spec)) {
    out << "kind = iid\ntheta =";
    for (const auto& r : iid->theta) out << ' ' << format_rational(r);
    out << '\n';
  } else if (const auto* det = std::get_if<DeterministicSpec>(&spec)) {
    out << "kind = deterministic\n";
    out << "prefix = " << format_symbols(det->prefix) << '\n';
    out << "period = " << format_symbols(det->period) << '\n';
  } else if (const auto* fac = std::get_if<FactorizableSpec>(&spec)) {
    out << "kind = factorizable\n";
    for (const auto& row : fac->steps) {
      out << "step =";
      for (const auto& r : row) out << ' ' << format_rational(r);
      out << '\n';
    }
    if (fac->generator == StepGenerator::OscillatingMu) {
      out << "generator = oscillating-mu\n";
    } else if (fac->generator == StepGenerator::OscillatingNu) {
      out << "generator = oscillating-nu\n";
    } else {
      out << "tail =";
      for (const auto& r : fac->tail) out << ' ' << format_rational(r);
      out << '\n';
    }
  } else {
    const auto& tab = std::get<TabularSpec>(spec);
    out << "kind = tabular\n";
    for (const auto& [path, value] : tab.nodes) {
      out << "node = " << (path.empty() ? "." : format_symbols(path)) << ' '
          << format_rational(value) << '\n';
    }
  }
  out << "weight = " << format_rational(e.weight) << '\n';
}

}  // namespace

std::string render_class_config(const WeightedClass& cls) {
  std::ostringstream out;
  out << "alphabet = " << cls.alphabet().size << '\n';
  if (cls.true_index()) {
    out << "true = " << cls.entry(*cls.true_index()).name << '\n';
  }
  out << "tie-break = " << format_tie_break(cls.tie_break()) << '\n';
  for (std::size_t i = 0; i < cls.size(); ++i) {
    render_model(out, cls.entry(i));
  }
  return out.str();
}

}  // namespace mdlseq
