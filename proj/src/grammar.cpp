#include "spatialqa/grammar.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "spatialqa/text.hpp"

namespace spatialqa {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i)
    if (i == s.size() || s[i] == sep) {
      out.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  return out;
}

std::vector<std::string> words_of(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

bool is_nonterminal(std::string_view w) {
  if (w.size() < 2) return false;
  return std::all_of(w.begin(), w.end(), [](char c) { return (c >= 'A' && c <= 'Z') || c == '_' || (c >= '0' && c <= '9'); }) &&
         w.front() >= 'A' && w.front() <= 'Z';
}

bool known_slot(std::string_view s) {
  return std::find(std::begin(kSlots), std::end(kSlots), s) != std::end(kSlots);
}

bool known_key(std::string_view category, std::string_view key) {
  if (category == "shape") return parse_shape(key).has_value();
  if (category == "color") return parse_color(key).has_value();
  if (category == "size") return parse_size(key).has_value();
  if (category == "hypernym") {
    auto h = parse_hypernym(key);
    return h && *h != Hypernym::None;
  }
  if (category == "relation") {
    auto r = parse_relation(key);
    return r && *r != Relation::TouchingEdge;
  }
  if (category == "edge") {
    auto e = parse_edge(key);
    return e && *e != Edge::None;
  }
  if (category == "number") {
    if (key.empty() || key.size() > 2) return false;
    return std::all_of(key.begin(), key.end(), [](char c) { return c >= '0' && c <= '9'; }) && key != "0";
  }
  return false;
}

}  // namespace

// ---------------------------------------------------------------------------
// Lexicon
// ---------------------------------------------------------------------------

Lexicon::Lexicon(const std::vector<LexEntry>& entries) {
  for (const auto& e : entries)
    if (known_key(e.category, e.key) && !e.forms.empty()) entries_.push_back(e);
  index();
}

void Lexicon::index() {
  phrases_.clear();
  max_number_ = 0;
  for (const auto& e : entries_) {
    if (e.category == "number") max_number_ = std::max(max_number_, std::stoi(e.key));
    for (const auto& [sg, pl] : e.forms) {
      LexPhrase p;
      p.category = e.category;
      p.key = e.key;
      for (const auto& t : tokenize(sg)) p.tokens.push_back(to_lower(t.text));
      phrases_.push_back(p);
      if (!pl.empty()) {
        p.tokens.clear();
        for (const auto& t : tokenize(pl)) p.tokens.push_back(to_lower(t.text));
        p.number = Number::Plural;
        phrases_.push_back(p);
      }
    }
  }
  std::stable_sort(phrases_.begin(), phrases_.end(),
                   [](const LexPhrase& a, const LexPhrase& b) { return a.tokens.size() > b.tokens.size(); });
}

const LexEntry* Lexicon::find(std::string_view category, std::string_view key) const {
  for (const auto& e : entries_)
    if (e.category == category && e.key == key) return &e;
  return nullptr;
}

namespace {
[[noreturn]] void missing(std::string_view category, std::string_view key) {
  throw GrammarError("lexicon has no entry " + std::string(category) + "." + std::string(key));
}
}  // namespace

std::string Lexicon::shape(Shape s, Number n) const {
  const LexEntry* e = find("shape", to_string(s));
  if (e == nullptr) missing("shape", to_string(s));
  const auto& [sg, pl] = e->forms.front();
  return n == Number::Plural && !pl.empty() ? pl : sg;
}

std::string Lexicon::hypernym(Hypernym h, Number n) const {
  const LexEntry* e = find("hypernym", to_string(h));
  if (e == nullptr) missing("hypernym", to_string(h));
  const auto& [sg, pl] = e->forms.front();
  return n == Number::Plural && !pl.empty() ? pl : sg;
}

std::string Lexicon::color(Color c) const {
  const LexEntry* e = find("color", to_string(c));
  if (e == nullptr) missing("color", to_string(c));
  return e->forms.front().first;
}

std::string Lexicon::size(Size s) const {
  const LexEntry* e = find("size", to_string(s));
  if (e == nullptr) missing("size", to_string(s));
  return e->forms.front().first;
}

std::string Lexicon::relation(const RelationKind& r) const { return relation_forms(r).front(); }

std::vector<std::string> Lexicon::relation_forms(const RelationKind& r) const {
  const LexEntry* e = r.type == Relation::TouchingEdge ? find("edge", to_string(r.edge))
                                                        : find("relation", to_string(r.type));
  if (e == nullptr) missing(r.type == Relation::TouchingEdge ? "edge" : "relation", to_string(r));
  std::vector<std::string> out;
  for (const auto& f : e->forms) out.push_back(f.first);
  return out;
}

std::string Lexicon::number(int n) const {
  const LexEntry* e = find("number", std::to_string(n));
  if (e == nullptr) missing("number", std::to_string(n));
  return e->forms.front().first;
}

Lexicon Lexicon::rewritten(const std::function<std::string(const std::string&)>& rewrite) const {
  Lexicon out = *this;
  for (auto& e : out.entries_)
    for (auto& [sg, pl] : e.forms) {
      sg = rewrite(sg);
      if (!pl.empty()) pl = rewrite(pl);
    }
  out.index();
  return out;
}

// ---------------------------------------------------------------------------
// Grammar
// ---------------------------------------------------------------------------

Grammar Grammar::parse(std::string_view text, std::string source) {
  Grammar g;
  enum class Section { None, Lexicon, Rules } section = Section::None;
  std::istringstream in{std::string(text)};
  int line_no = 0;
  auto fail = [&](const std::string& msg) {
    throw GrammarError(source + ":" + std::to_string(line_no) + ": " + msg);
  };
  for (std::string raw; std::getline(in, raw);) {
    ++line_no;
    std::string line = raw;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line == "@lexicon") {
      section = Section::Lexicon;
      continue;
    }
    if (line == "@rules") {
      section = Section::Rules;
      continue;
    }
    if (section == Section::Lexicon) {
      const auto eq = line.find('=');
      if (eq == std::string::npos) fail("expected 'category.key = forms'");
      const std::string lhs = trim(std::string_view(line).substr(0, eq));
      const auto dot = lhs.find('.');
      if (dot == std::string::npos) fail("lexicon key needs a category");
      LexEntry e;
      e.category = lhs.substr(0, dot);
      e.key = lhs.substr(dot + 1);
      e.line = line_no;
      for (const auto& alt : split(std::string_view(line).substr(eq + 1), '|')) {
        auto parts = split(alt, '/');
        if (parts.empty() || parts[0].empty() || parts.size() > 2) fail("malformed lexicon forms");
        e.forms.emplace_back(parts[0], parts.size() == 2 ? parts[1] : std::string{});
      }
      g.lex_entries_.push_back(std::move(e));
    } else if (section == Section::Rules) {
      const auto arrow = line.find("->");
      if (arrow == std::string::npos) fail("expected 'LHS -> ...'");
      const std::string lhs = trim(std::string_view(line).substr(0, arrow));
      if (!is_nonterminal(lhs)) fail("left-hand side must be an upper-case nonterminal");
      for (const auto& alt : split(std::string_view(line).substr(arrow + 2), '|')) {
        Production p;
        p.lhs = lhs;
        p.line = line_no;
        bool in_brace = false;
        for (std::string w : words_of(alt)) {
          if (w.size() > 1 && w.front() == '@') {
            try {
              p.weight = std::stod(w.substr(1));
            } catch (const std::exception&) {
              fail("bad weight " + w);
            }
            if (!(p.weight > 0.0)) fail("weights must be positive");
            continue;
          }
          if (w.size() > 2 && w.front() == '<' && w.back() == '>') {
            p.conditions.push_back(w.substr(1, w.size() - 2));
            continue;
          }
          bool open = false;
          bool close = false;
          if (w.size() > 1 && w.front() == '{') {
            open = true;
            w.erase(0, 1);
          }
          if (w.size() > 1 && w.back() == '}') {
            close = true;
            w.pop_back();
          }
          if (open) in_brace = true;
          Symbol s;
          s.indicator = in_brace;
          if (w.front() == '$') {
            s.kind = SymbolKind::Slot;
          } else if (is_nonterminal(w)) {
            s.kind = SymbolKind::Nonterminal;
          } else {
            s.kind = SymbolKind::Terminal;
            const auto toks = tokenize(w);
            if (toks.size() != 1) fail("terminal '" + w + "' is not a single token");
            w = to_lower(w);
          }
          s.text = w;
          p.rhs.push_back(std::move(s));
          if (close) in_brace = false;
        }
        if (in_brace) fail("unclosed indicator brace");
        if (p.rhs.empty()) fail("empty alternative for " + lhs);
        g.productions_.push_back(std::move(p));
      }
    } else {
      fail("content before @lexicon or @rules");
    }
  }
  g.lexicon_ = Lexicon(g.lex_entries_);
  return g;
}

Grammar Grammar::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw GrammarError("cannot open grammar file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), path);
}

const Grammar& Grammar::standard() {
  static const Grammar g = load(std::string(SPATIALQA_DATA_DIR) + "/grammar.txt");
  return g;
}

std::vector<const Production*> Grammar::alternatives(std::string_view lhs) const {
  std::vector<const Production*> out;
  for (const auto& p : productions_)
    if (p.lhs == lhs) out.push_back(&p);
  return out;
}

std::vector<std::vector<Symbol>> Grammar::flatten(std::string_view start) const {
  std::vector<std::vector<Symbol>> out;
  std::function<void(std::vector<Symbol>, std::size_t, int)> expand =
      [&](std::vector<Symbol> seq, std::size_t from, int depth) {
        if (depth > 32) throw GrammarError("recursive nonterminal under " + std::string(start));
        for (std::size_t i = from; i < seq.size(); ++i) {
          if (seq[i].kind != SymbolKind::Nonterminal) continue;
          const auto alts = alternatives(seq[i].text);
          for (const Production* p : alts) {
            std::vector<Symbol> next(seq.begin(), seq.begin() + static_cast<std::ptrdiff_t>(i));
            for (Symbol s : p->rhs) {
              s.indicator = s.indicator || seq[i].indicator;
              next.push_back(std::move(s));
            }
            next.insert(next.end(), seq.begin() + static_cast<std::ptrdiff_t>(i) + 1, seq.end());
            expand(std::move(next), i, depth + 1);
          }
          return;
        }
        out.push_back(std::move(seq));
      };
  expand({Symbol{SymbolKind::Nonterminal, std::string(start), false}}, 0, 0);
  return out;
}

Grammar Grammar::with_lexicon(Lexicon lex) const {
  Grammar g = *this;
  g.lexicon_ = std::move(lex);
  return g;
}

std::vector<std::string> validate_grammar(const Grammar& g) {
  std::vector<std::string> out;
  std::set<std::string> defined;
  for (const auto& p : g.productions()) defined.insert(p.lhs);

  for (auto start : kStartSymbols)
    if (!defined.count(std::string(start)))
      out.push_back("start symbol " + std::string(start) + " has no production");

  // Undefined nonterminals and unknown slots.
  std::set<std::string> reported;
  for (const auto& p : g.productions())
    for (const auto& s : p.rhs) {
      if (s.kind == SymbolKind::Nonterminal && !defined.count(s.text) && reported.insert(s.text).second)
        out.push_back("line " + std::to_string(p.line) + ": nonterminal " + s.text + " is never defined");
      if (s.kind == SymbolKind::Slot && !known_slot(s.text) && reported.insert(s.text).second)
        out.push_back("line " + std::to_string(p.line) + ": unknown slot " + s.text);
    }

  // Reachability from the start symbols, with a cycle check.
  std::set<std::string> reached;
  std::set<std::string> on_path;
  std::set<std::string> cyclic;
  std::function<void(const std::string&)> visit = [&](const std::string& nt) {
    if (on_path.count(nt)) {
      cyclic.insert(nt);
      return;
    }
    if (!reached.insert(nt).second) return;
    on_path.insert(nt);
    for (const Production* p : g.alternatives(nt))
      for (const auto& s : p->rhs)
        if (s.kind == SymbolKind::Nonterminal && defined.count(s.text)) visit(s.text);
    on_path.erase(nt);
  };
  for (auto start : kStartSymbols) visit(std::string(start));
  for (const auto& nt : defined)
    if (!reached.count(nt)) out.push_back("nonterminal " + nt + " is unreachable from every start symbol");
  for (const auto& nt : cyclic) out.push_back("nonterminal " + nt + " is recursive");

  // Lexicon entries must name vocabulary values, and the vocabulary must be covered.
  std::set<std::pair<std::string, std::string>> keys;
  for (const auto& e : g.lexicon_entries()) {
    if (!known_key(e.category, e.key))
      out.push_back("line " + std::to_string(e.line) + ": " + e.category + " '" + e.key +
                    "' is not in the vocabulary");
    else if (!keys.emplace(e.category, e.key).second)
      out.push_back("line " + std::to_string(e.line) + ": duplicate lexicon entry " + e.category + "." + e.key);
  }
  auto need = [&](std::string_view category, std::string_view key) {
    if (!keys.count({std::string(category), std::string(key)}))
      out.push_back("lexicon lacks " + std::string(category) + "." + std::string(key));
  };
  for (Shape s : kAllShapes) need("shape", to_string(s));
  for (Color c : kAllColors) need("color", to_string(c));
  for (Size s : kAllSizes) need("size", to_string(s));
  for (Hypernym h : {Hypernym::Object, Hypernym::Shape, Hypernym::Thing}) need("hypernym", to_string(h));
  for (Relation r : kObjectRelations) need("relation", to_string(r));
  need("relation", to_string(Relation::In));
  for (Edge e : kAllEdges) need("edge", to_string(e));
  for (int n = 1; n <= 4; ++n) need("number", std::to_string(n));

  // Indicator terminals must verbalize containment.
  std::set<std::string> in_forms;
  for (const auto& e : g.lexicon_entries())
    if (e.category == "relation" && e.key == "in")
      for (const auto& f : e.forms) in_forms.insert(to_lower(f.first));
  for (const auto& p : g.productions())
    for (const auto& s : p.rhs)
      if (s.indicator && s.kind == SymbolKind::Terminal && !in_forms.count(s.text))
        out.push_back("line " + std::to_string(p.line) + ": indicator '" + s.text +
                      "' is not a form of relation.in");
  return out;
}

std::vector<Symbol> Grammar::expand(std::string_view start, const std::set<std::string>& conds, Rng& rng) const {
  std::vector<const Production*> eligible;
  std::vector<double> weights;
  for (const Production* p : alternatives(start)) {
    if (!std::all_of(p->conditions.begin(), p->conditions.end(),
                     [&](const std::string& c) { return conds.count(c) > 0; }))
      continue;
    eligible.push_back(p);
    weights.push_back(p->weight);
  }
  if (eligible.empty()) throw GrammarError("no production of " + std::string(start) + " applies");
  const Production* p = eligible[rng.weighted(weights)];
  std::vector<Symbol> out;
  for (const auto& s : p->rhs) {
    if (s.kind != SymbolKind::Nonterminal) {
      out.push_back(s);
      continue;
    }
    for (Symbol inner : expand(s.text, conds, rng)) {
      inner.indicator = inner.indicator || s.indicator;
      out.push_back(std::move(inner));
    }
  }
  return out;
}

}  // namespace spatialqa
