#include "causalnet/formula.hpp"

#include <cctype>

#include "causalnet/errors.hpp"

namespace causalnet {

Formula Formula::atom(std::string name, bool fo, bool neg) {
  Formula f;
  f.op = Op::Atom;
  f.name = std::move(name);
  f.fo = fo;
  f.neg = neg;
  return f;
}

Formula Formula::unit() {
  Formula f;
  f.op = Op::Unit;
  return f;
}

static Formula binary(Op op, Formula l, Formula r) {
  Formula f;
  f.op = op;
  f.children.push_back(std::move(l));
  f.children.push_back(std::move(r));
  return f;
}

Formula Formula::tensor(Formula l, Formula r) {
  return binary(Op::Tensor, std::move(l), std::move(r));
}
Formula Formula::seq(Formula l, Formula r) {
  return binary(Op::Seq, std::move(l), std::move(r));
}
Formula Formula::par(Formula l, Formula r) {
  return binary(Op::Par, std::move(l), std::move(r));
}

bool Formula::operator==(const Formula& other) const {
  if (op != other.op) return false;
  if (op == Op::Atom)
    return name == other.name && fo == other.fo && neg == other.neg;
  if (op == Op::Unit) return true;
  return children[0] == other.children[0] && children[1] == other.children[1];
}

namespace {

struct Occurrence {
  std::string name;
  bool fo;
  bool neg;
  std::size_t offset;
};

class Parser {
 public:
  Parser(const std::string& text) : text_(text) {}

  Formula run() {
    Formula f = parse_expr();
    skip_ws();
    if (pos_ != text_.size())
      throw ParseError("unexpected trailing input", pos_);
    check_occurrences();
    return f;
  }

 private:
  const std::string& text_;
  std::size_t pos_ = 0;
  std::vector<Occurrence> occs_;

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  Formula parse_expr() {
    Formula acc = parse_term();
    char chain = '\0';
    while (true) {
      char c = peek();
      if (c != '*' && c != '%' && c != '<') break;
      std::size_t at = pos_;
      if (chain == '\0')
        chain = c;
      else if (c != chain)
        throw ParseError("mixing operators requires parentheses", at);
      ++pos_;
      Formula rhs = parse_term();
      switch (c) {
        case '*': acc = Formula::tensor(std::move(acc), std::move(rhs)); break;
        case '%': acc = Formula::par(std::move(acc), std::move(rhs)); break;
        case '<': acc = Formula::seq(std::move(acc), std::move(rhs)); break;
      }
    }
    return acc;
  }

  Formula parse_term() {
    char c = peek();
    if (c == '\0') throw ParseError("unexpected end of input", pos_);
    if (c == '(') {
      ++pos_;
      Formula f = parse_expr();
      if (peek() != ')') throw ParseError("expected ')'", pos_);
      ++pos_;
      return f;
    }
    bool fo = false;
    if (c == '!') {
      ++pos_;
      fo = true;
      c = peek();
    }
    if (c == '@')
      throw ParseError("'@' names are reserved for generated atoms", pos_);
    if (!std::isalpha(static_cast<unsigned char>(c)))
      throw ParseError(fo ? "expected atom after '!'" : "expected formula", pos_);
    std::size_t start = pos_;
    std::string id;
    while (pos_ < text_.size()) {
      char ch = text_[pos_];
      if (std::isalnum(static_cast<unsigned char>(ch)) || ch == '_') {
        id += ch;
        ++pos_;
      } else {
        break;
      }
    }
    if (id == "I") {
      if (fo) throw ParseError("the unit cannot carry '!'", start);
      if (pos_ < text_.size() && text_[pos_] == '~')
        throw ParseError("the unit is self-dual; drop '~'", pos_);
      return Formula::unit();
    }
    bool neg = false;
    if (pos_ < text_.size() && text_[pos_] == '~') {
      neg = true;
      ++pos_;
    }
    occs_.push_back({id, fo, neg, start});
    return Formula::atom(id, fo, neg);
  }

  void check_occurrences() {
    std::map<std::string, const Occurrence*> pos_seen, neg_seen;
    std::map<std::string, bool> fo_flag;
    for (const Occurrence& o : occs_) {
      auto it = fo_flag.find(o.name);
      if (it == fo_flag.end())
        fo_flag[o.name] = o.fo;
      else if (it->second != o.fo)
        throw ParseError("atom '" + o.name + "' occurs both with and without '!'",
                         o.offset);
      auto& seen = o.neg ? neg_seen : pos_seen;
      if (seen.count(o.name))
        throw ParseError("atom '" + o.name + "' occurs twice with the same polarity",
                         o.offset);
      seen[o.name] = &o;
    }
  }
};

}  // namespace

Formula parse_formula(const std::string& text) { return Parser(text).run(); }

static char op_char(Op op) {
  switch (op) {
    case Op::Tensor: return '*';
    case Op::Par: return '%';
    case Op::Seq: return '<';
    default: return '?';
  }
}

static void render_into(const Formula& f, std::string& out, const Formula* parent,
                        bool right_child) {
  if (f.op == Op::Unit) {
    out += 'I';
    return;
  }
  if (f.op == Op::Atom) {
    if (f.fo) out += '!';
    out += f.name;
    if (f.neg) out += '~';
    return;
  }
  bool parens = parent != nullptr && (right_child || parent->op != f.op);
  if (parens) out += '(';
  render_into(f.children[0], out, &f, false);
  out += ' ';
  out += op_char(f.op);
  out += ' ';
  render_into(f.children[1], out, &f, true);
  if (parens) out += ')';
}

std::string render(const Formula& f) {
  std::string out;
  render_into(f, out, nullptr, false);
  return out;
}

Formula negate(const Formula& f) {
  switch (f.op) {
    case Op::Atom: return Formula::atom(f.name, f.fo, !f.neg);
    case Op::Unit: return Formula::unit();
    case Op::Tensor:
      return Formula::par(negate(f.children[0]), negate(f.children[1]));
    case Op::Par:
      return Formula::tensor(negate(f.children[0]), negate(f.children[1]));
    case Op::Seq:
      return Formula::seq(negate(f.children[0]), negate(f.children[1]));
  }
  return Formula::unit();  // unreachable
}

std::vector<Leaf> leaf_order(const Formula& f) {
  std::vector<Leaf> leaves;
  auto walk = [&](auto&& self, const Formula& g) -> void {
    switch (g.op) {
      case Op::Unit: leaves.push_back({true, "", false, false}); break;
      case Op::Atom: leaves.push_back({false, g.name, g.fo, g.neg}); break;
      default:
        self(self, g.children[0]);
        self(self, g.children[1]);
    }
  };
  walk(walk, f);
  return leaves;
}

bool is_balanced(const Formula& f) {
  struct Info {
    int pos = 0, neg = 0;
    bool fo = false, fo_set = false, fo_ok = true;
  };
  std::map<std::string, Info> seen;
  for (const Leaf& l : leaf_order(f)) {
    if (l.unit) continue;
    Info& info = seen[l.name];
    (l.neg ? info.neg : info.pos)++;
    if (!info.fo_set) {
      info.fo = l.fo;
      info.fo_set = true;
    } else if (info.fo != l.fo) {
      info.fo_ok = false;
    }
  }
  for (const auto& [name, info] : seen)
    if (info.pos != 1 || info.neg != 1 || !info.fo_ok) return false;
  return true;
}

std::map<std::string, std::pair<std::size_t, std::size_t>> atom_pairs(
    const Formula& f) {
  std::map<std::string, std::pair<std::size_t, std::size_t>> pairs;
  std::vector<Leaf> leaves = leaf_order(f);
  for (std::size_t i = 0; i < leaves.size(); ++i) {
    if (leaves[i].unit) continue;
    auto& entry = pairs[leaves[i].name];
    (leaves[i].neg ? entry.second : entry.first) = i;
  }
  return pairs;
}

Json formula_to_json(const Formula& f) {
  Json j;
  switch (f.op) {
    case Op::Atom:
      j["op"] = "atom";
      j["name"] = f.name;
      j["fo"] = f.fo;
      j["neg"] = f.neg;
      break;
    case Op::Unit: j["op"] = "unit"; break;
    case Op::Tensor:
    case Op::Seq:
    case Op::Par:
      j["op"] = f.op == Op::Tensor ? "tensor" : (f.op == Op::Seq ? "seq" : "par");
      j["children"] = Json::array({formula_to_json(f.children[0]),
                                   formula_to_json(f.children[1])});
      break;
  }
  return j;
}

Formula formula_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("op") || !j["op"].is_string())
    throw ValidationError("formula JSON: missing string field 'op'");
  std::string op = j["op"].get<std::string>();
  if (op == "unit") return Formula::unit();
  if (op == "atom") {
    if (!j.contains("name") || !j["name"].is_string() ||
        j["name"].get<std::string>().empty())
      throw ValidationError("formula JSON: atom requires non-empty 'name'");
    bool fo = j.value("fo", false);
    bool neg = j.value("neg", false);
    return Formula::atom(j["name"].get<std::string>(), fo, neg);
  }
  if (op == "tensor" || op == "seq" || op == "par") {
    if (!j.contains("children") || !j["children"].is_array() ||
        j["children"].size() != 2)
      throw ValidationError("formula JSON: '" + op + "' requires two children");
    Formula l = formula_from_json(j["children"][0]);
    Formula r = formula_from_json(j["children"][1]);
    if (op == "tensor") return Formula::tensor(std::move(l), std::move(r));
    if (op == "seq") return Formula::seq(std::move(l), std::move(r));
    return Formula::par(std::move(l), std::move(r));
  }
  throw ValidationError("formula JSON: unknown op '" + op + "'");
}

}  // namespace causalnet
