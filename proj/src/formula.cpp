#include "ckl/formula.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <utility>

namespace ckl {

AgentSet::AgentSet(std::vector<int> agents) : ids_(std::move(agents)) {
  if (ids_.empty()) throw std::invalid_argument("agent set must be nonempty");
  std::sort(ids_.begin(), ids_.end());
  if (std::adjacent_find(ids_.begin(), ids_.end()) != ids_.end())
    throw std::invalid_argument("agent set contains duplicates");
  if (ids_.front() < 1) throw std::invalid_argument("agent ids must be positive");
}

AgentSet AgentSet::range(int n) {
  if (n < 1) throw std::invalid_argument("agent count must be at least 1");
  std::vector<int> ids(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) ids[static_cast<std::size_t>(i)] = i + 1;
  return AgentSet(std::move(ids));
}

bool AgentSet::contains(int agent) const {
  return std::binary_search(ids_.begin(), ids_.end(), agent);
}

int AgentSet::index_of(int agent) const {
  auto it = std::lower_bound(ids_.begin(), ids_.end(), agent);
  if (it == ids_.end() || *it != agent) return -1;
  return static_cast<int>(it - ids_.begin());
}

struct Formula::Node {
  Conn kind;
  std::string name;  // Var
  int agent = 0;     // K
  std::shared_ptr<const Node> a, b;
};

Formula Formula::make(Conn kind, std::string name, int agent, Formula* a, Formula* b) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->name = std::move(name);
  n->agent = agent;
  if (a) n->a = std::move(a->node_);
  if (b) n->b = std::move(b->node_);
  return Formula(std::move(n));
}

bool Formula::node_eq(const Node* x, const Node* y) {
  if (x == y) return true;
  if (x->kind != y->kind) return false;
  switch (x->kind) {
    case Conn::Var:
      return x->name == y->name;
    case Conn::Top:
    case Conn::Bot:
      return true;
    case Conn::K:
      return x->agent == y->agent && node_eq(x->a.get(), y->a.get());
    case Conn::Not:
    case Conn::E:
    case Conn::C:
      return node_eq(x->a.get(), y->a.get());
    default:
      return node_eq(x->a.get(), y->a.get()) && node_eq(x->b.get(), y->b.get());
  }
}

Formula Formula::var(std::string name) {
  return make(Conn::Var, std::move(name), 0, nullptr, nullptr);
}
Formula Formula::top() { return make(Conn::Top, "", 0, nullptr, nullptr); }
Formula Formula::bot() { return make(Conn::Bot, "", 0, nullptr, nullptr); }
Formula Formula::neg(Formula f) { return make(Conn::Not, "", 0, &f, nullptr); }
Formula Formula::conj(Formula l, Formula r) { return make(Conn::And, "", 0, &l, &r); }
Formula Formula::disj(Formula l, Formula r) { return make(Conn::Or, "", 0, &l, &r); }
Formula Formula::implies(Formula l, Formula r) { return make(Conn::Implies, "", 0, &l, &r); }
Formula Formula::iff(Formula l, Formula r) { return make(Conn::Iff, "", 0, &l, &r); }
Formula Formula::knows(int agent, Formula f) { return make(Conn::K, "", agent, &f, nullptr); }
Formula Formula::everyone(Formula f) { return make(Conn::E, "", 0, &f, nullptr); }
Formula Formula::common(Formula f) { return make(Conn::C, "", 0, &f, nullptr); }

Conn Formula::kind() const { return node_->kind; }
const std::string& Formula::var_name() const { return node_->name; }
int Formula::agent() const { return node_->agent; }
Formula Formula::left() const { return Formula(node_->a); }
Formula Formula::right() const { return Formula(node_->b); }

bool operator==(const Formula& a, const Formula& b) {
  return Formula::node_eq(a.node_.get(), b.node_.get());
}

// ---------------------------------------------------------------------------
// Lexing and parsing

namespace {

enum class Tok { Var, Top, Bot, K, E, C, Not, And, Or, Implies, Iff, LParen, RParen, End };

struct Token {
  Tok type;
  std::string text;
  int agent = 0;
  std::size_t pos = 0;
};

std::vector<Token> lex(std::string_view text, const AgentSet& agents) {
  std::vector<Token> out;
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    std::size_t start = i;
    if (c == '(') {
      out.push_back({Tok::LParen, "(", 0, start});
      ++i;
    } else if (c == ')') {
      out.push_back({Tok::RParen, ")", 0, start});
      ++i;
    } else if (c == '~') {
      out.push_back({Tok::Not, "~", 0, start});
      ++i;
    } else if (c == '&') {
      out.push_back({Tok::And, "&", 0, start});
      ++i;
    } else if (c == '|') {
      out.push_back({Tok::Or, "|", 0, start});
      ++i;
    } else if (c == '-') {
      if (i + 1 >= n || text[i + 1] != '>')
        throw ParseError("expected '->'", start);
      out.push_back({Tok::Implies, "->", 0, start});
      i += 2;
    } else if (c == '<') {
      if (i + 2 >= n || text[i + 1] != '-' || text[i + 2] != '>')
        throw ParseError("expected '<->'", start);
      out.push_back({Tok::Iff, "<->", 0, start});
      i += 3;
    } else if (c == 'K') {
      ++i;
      if (i >= n || !std::isdigit(static_cast<unsigned char>(text[i])))
        throw ParseError("expected agent index after 'K'", start);
      int agent = 0;
      while (i < n && std::isdigit(static_cast<unsigned char>(text[i]))) {
        agent = agent * 10 + (text[i] - '0');
        if (agent > 1000000) throw ParseError("agent index out of range", start);
        ++i;
      }
      if (!agents.contains(agent))
        throw ParseError("unknown agent index K" + std::to_string(agent), start);
      out.push_back({Tok::K, std::string(text.substr(start, i - start)), agent, start});
    } else if (c == 'E') {
      out.push_back({Tok::E, "E", 0, start});
      ++i;
    } else if (c == 'C') {
      out.push_back({Tok::C, "C", 0, start});
      ++i;
    } else if (c >= 'a' && c <= 'z') {
      ++i;
      while (i < n) {
        char d = text[i];
        if ((d >= 'a' && d <= 'z') || (d >= '0' && d <= '9') || d == '_')
          ++i;
        else
          break;
      }
      std::string word(text.substr(start, i - start));
      if (word == "top")
        out.push_back({Tok::Top, word, 0, start});
      else if (word == "bot")
        out.push_back({Tok::Bot, word, 0, start});
      else
        out.push_back({Tok::Var, word, 0, start});
    } else {
      throw ParseError(std::string("unexpected character '") + c + "'", start);
    }
  }
  out.push_back({Tok::End, "", 0, n});
  return out;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  Formula parse_all() {
    Formula f = parse_iff();
    if (peek().type != Tok::End)
      throw ParseError("unexpected token '" + peek().text + "'", peek().pos);
    return f;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  Token take() { return toks_[pos_++]; }
  bool accept(Tok t) {
    if (peek().type == t) {
      ++pos_;
      return true;
    }
    return false;
  }

  Formula parse_iff() {
    Formula l = parse_implies();
    if (accept(Tok::Iff)) return Formula::iff(std::move(l), parse_iff());
    return l;
  }

  Formula parse_implies() {
    Formula l = parse_or();
    if (accept(Tok::Implies)) return Formula::implies(std::move(l), parse_implies());
    return l;
  }

  Formula parse_or() {
    Formula l = parse_and();
    while (accept(Tok::Or)) l = Formula::disj(std::move(l), parse_and());
    return l;
  }

  Formula parse_and() {
    Formula l = parse_unary();
    while (accept(Tok::And)) l = Formula::conj(std::move(l), parse_unary());
    return l;
  }

  Formula parse_unary() {
    const Token& t = peek();
    switch (t.type) {
      case Tok::Not:
        take();
        return Formula::neg(parse_unary());
      case Tok::K: {
        Token k = take();
        return Formula::knows(k.agent, parse_unary());
      }
      case Tok::E:
        take();
        return Formula::everyone(parse_unary());
      case Tok::C:
        take();
        return Formula::common(parse_unary());
      default:
        return parse_atom();
    }
  }

  Formula parse_atom() {
    Token t = take();
    switch (t.type) {
      case Tok::Var:
        return Formula::var(t.text);
      case Tok::Top:
        return Formula::top();
      case Tok::Bot:
        return Formula::bot();
      case Tok::LParen: {
        Formula f = parse_iff();
        if (!accept(Tok::RParen)) throw ParseError("expected ')'", peek().pos);
        return f;
      }
      case Tok::End:
        throw ParseError("unexpected end of input", t.pos);
      default:
        throw ParseError("unexpected token '" + t.text + "'", t.pos);
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

Formula parse(std::string_view text, const AgentSet& agents) {
  return Parser(lex(text, agents)).parse_all();
}

// ---------------------------------------------------------------------------
// Printing

namespace {

// unary 5 > & 4 > | 3 > -> 2 > <-> 1; atoms 6
int precedence(const Formula& f) {
  switch (f.kind()) {
    case Conn::Var:
    case Conn::Top:
    case Conn::Bot:
      return 6;
    case Conn::Not:
    case Conn::K:
    case Conn::E:
    case Conn::C:
      return 5;
    case Conn::And:
      return 4;
    case Conn::Or:
      return 3;
    case Conn::Implies:
      return 2;
    case Conn::Iff:
      return 1;
  }
  return 6;
}

void print(const Formula& f, int ctx, std::string& out) {
  const bool paren = precedence(f) < ctx;
  if (paren) out += '(';
  switch (f.kind()) {
    case Conn::Var:
      out += f.var_name();
      break;
    case Conn::Top:
      out += "top";
      break;
    case Conn::Bot:
      out += "bot";
      break;
    case Conn::Not:
      out += '~';
      print(f.left(), 5, out);
      break;
    case Conn::K:
      out += 'K';
      out += std::to_string(f.agent());
      out += ' ';
      print(f.left(), 5, out);
      break;
    case Conn::E:
      out += "E ";
      print(f.left(), 5, out);
      break;
    case Conn::C:
      out += "C ";
      print(f.left(), 5, out);
      break;
    case Conn::And:
      print(f.left(), 4, out);
      out += " & ";
      print(f.right(), 5, out);
      break;
    case Conn::Or:
      print(f.left(), 3, out);
      out += " | ";
      print(f.right(), 4, out);
      break;
    case Conn::Implies:
      print(f.left(), 3, out);
      out += " -> ";
      print(f.right(), 2, out);
      break;
    case Conn::Iff:
      print(f.left(), 2, out);
      out += " <-> ";
      print(f.right(), 1, out);
      break;
  }
  if (paren) out += ')';
}

}  // namespace

std::string to_string(const Formula& f) {
  std::string out;
  print(f, 0, out);
  return out;
}

// ---------------------------------------------------------------------------
// Derived-connective expansion

namespace {

Formula conj_over_agents(const AgentSet& agents, const Formula& body) {
  const auto& ids = agents.ids();
  Formula acc = Formula::knows(ids[0], body);
  for (std::size_t i = 1; i < ids.size(); ++i)
    acc = Formula::conj(std::move(acc), Formula::knows(ids[i], body));
  return acc;
}

// ~f | g written in the core: ~(~~f & ~g)
Formula core_implies(Formula f, Formula g) {
  return Formula::neg(Formula::conj(Formula::neg(Formula::neg(std::move(f))),
                                    Formula::neg(std::move(g))));
}

}  // namespace

Formula expand(const Formula& f, const AgentSet& agents) {
  switch (f.kind()) {
    case Conn::Var:
    case Conn::Top:
    case Conn::Bot:
      return f;
    case Conn::Not:
      return Formula::neg(expand(f.left(), agents));
    case Conn::And:
      return Formula::conj(expand(f.left(), agents), expand(f.right(), agents));
    case Conn::K:
      return Formula::knows(f.agent(), expand(f.left(), agents));
    case Conn::C:
      return Formula::common(expand(f.left(), agents));
    case Conn::E:
      return conj_over_agents(agents, expand(f.left(), agents));
    case Conn::Or:
      return Formula::neg(Formula::conj(Formula::neg(expand(f.left(), agents)),
                                        Formula::neg(expand(f.right(), agents))));
    case Conn::Implies:
      return core_implies(expand(f.left(), agents), expand(f.right(), agents));
    case Conn::Iff: {
      Formula l = expand(f.left(), agents);
      Formula r = expand(f.right(), agents);
      return Formula::conj(core_implies(l, r), core_implies(r, l));
    }
  }
  return f;
}

Formula expand_e(const Formula& f, const AgentSet& agents) {
  switch (f.kind()) {
    case Conn::Var:
    case Conn::Top:
    case Conn::Bot:
      return f;
    case Conn::Not:
      return Formula::neg(expand_e(f.left(), agents));
    case Conn::K:
      return Formula::knows(f.agent(), expand_e(f.left(), agents));
    case Conn::C:
      return Formula::common(expand_e(f.left(), agents));
    case Conn::E:
      return conj_over_agents(agents, expand_e(f.left(), agents));
    case Conn::And:
      return Formula::conj(expand_e(f.left(), agents), expand_e(f.right(), agents));
    case Conn::Or:
      return Formula::disj(expand_e(f.left(), agents), expand_e(f.right(), agents));
    case Conn::Implies:
      return Formula::implies(expand_e(f.left(), agents), expand_e(f.right(), agents));
    case Conn::Iff:
      return Formula::iff(expand_e(f.left(), agents), expand_e(f.right(), agents));
  }
  return f;
}

bool eq_mod_e(const Formula& a, const Formula& b, const AgentSet& agents) {
  return expand_e(a, agents) == expand_e(b, agents);
}

Formula e_power(Formula f, int n) {
  if (n < 0) throw std::invalid_argument("e_power: negative exponent");
  for (int i = 0; i < n; ++i) f = Formula::everyone(std::move(f));
  return f;
}

namespace {

void collect_vars(const Formula& f, std::set<std::string>& out) {
  switch (f.kind()) {
    case Conn::Var:
      out.insert(f.var_name());
      return;
    case Conn::Top:
    case Conn::Bot:
      return;
    case Conn::Not:
    case Conn::K:
    case Conn::E:
    case Conn::C:
      collect_vars(f.left(), out);
      return;
    default:
      collect_vars(f.left(), out);
      collect_vars(f.right(), out);
      return;
  }
}

}  // namespace

std::vector<std::string> variables(const Formula& f) {
  std::set<std::string> s;
  collect_vars(f, s);
  return {s.begin(), s.end()};
}

}  // namespace ckl
