#pragma once

#include <map>
#include <string>
#include <vector>

#include "json.hpp"

namespace causalnet {

using Json = nlohmann::ordered_json;

// Connectives of the causal fragment. Formulae are kept in negation normal
// form: negation lives on atoms only.
enum class Op { Atom, Unit, Tensor, Seq, Par };

struct Formula {
  Op op = Op::Unit;
  std::string name;  // atoms only
  bool fo = false;   // first-order marker (atoms only)
  bool neg = false;  // dual marker (atoms only)
  std::vector<Formula> children;  // binary connectives: exactly two

  static Formula atom(std::string name, bool fo = false, bool neg = false);
  static Formula unit();
  static Formula tensor(Formula l, Formula r);
  static Formula seq(Formula l, Formula r);
  static Formula par(Formula l, Formula r);

  bool is_atom() const { return op == Op::Atom; }
  bool is_unit() const { return op == Op::Unit; }
  bool is_binary() const { return !is_atom() && !is_unit(); }

  bool operator==(const Formula& other) const;
};

// One leaf occurrence, in left-to-right order.
struct Leaf {
  bool unit = false;
  std::string name;
  bool fo = false;
  bool neg = false;
};

// Concrete syntax: `*` tensor, `%` par, `<` seq, postfix `~` dual, prefix `!`
// first-order, `I` unit. No precedence: chains of one operator associate to
// the left; mixing operators requires parentheses. Rejects atoms occurring
// twice with the same polarity and occurrences with mismatched `!` flags.
Formula parse_formula(const std::string& text);

// Inverse of parse_formula: parse_formula(render(f)) == f for parseable f.
std::string render(const Formula& f);

// De Morgan dual in negation normal form: (F*G)~ = F~%G~, (F<G)~ = F~<G~,
// I~ = I. Involution.
Formula negate(const Formula& f);

// Every atom name occurs exactly once positively and once negatively, with
// matching first-order flags.
bool is_balanced(const Formula& f);

std::vector<Leaf> leaf_order(const Formula& f);

// For balanced formulae: atom name -> (positive leaf index, negative leaf
// index) into leaf_order.
std::map<std::string, std::pair<std::size_t, std::size_t>> atom_pairs(
    const Formula& f);

Json formula_to_json(const Formula& f);
Formula formula_from_json(const Json& j);

}  // namespace causalnet
