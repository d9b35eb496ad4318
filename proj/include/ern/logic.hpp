#pragma once

#include <concepts>
#include <cstddef>
#include <map>
#include <utility>
#include <vector>

#include "ern/errors.hpp"
#include "ern/types.hpp"

namespace ern {

// Monotone boolean expression over incoming links of one vertex. Leaves are
// link ids; interior nodes are conjunctions or disjunctions. The empty
// expression (a vertex with no incoming links) evaluates to false.
class LogicExpr {
 public:
  enum class Kind { Empty, Leaf, And, Or };

  LogicExpr() = default;

  static LogicExpr leaf(LinkId link) {
    LogicExpr e;
    e.kind_ = Kind::Leaf;
    e.link_ = std::move(link);
    return e;
  }

  static LogicExpr all_of(std::vector<LogicExpr> operands) {
    return combine(Kind::And, std::move(operands));
  }

  static LogicExpr any_of(std::vector<LogicExpr> operands) {
    return combine(Kind::Or, std::move(operands));
  }

  Kind kind() const { return kind_; }
  bool is_empty() const { return kind_ == Kind::Empty; }

  const LinkId& link_id() const {
    if (kind_ != Kind::Leaf) throw ContractError("link_id() on a non-leaf expression");
    return link_;
  }

  const std::vector<LogicExpr>& operands() const { return children_; }

  // truth: callable LinkId -> bool.
  template <typename Truth>
    requires std::predicate<Truth&, const LinkId&>
  bool evaluate(Truth&& truth) const {
    switch (kind_) {
      case Kind::Empty:
        return false;
      case Kind::Leaf:
        return truth(link_);
      case Kind::And:
        for (const LogicExpr& c : children_)
          if (!c.evaluate(truth)) return false;
        return true;
      case Kind::Or:
        for (const LogicExpr& c : children_)
          if (c.evaluate(truth)) return true;
        return false;
    }
    return false;
  }

  // Map form; links absent from the map are false.
  bool evaluate(const std::map<LinkId, bool>& truth) const {
    return evaluate([&truth](const LinkId& l) {
      auto it = truth.find(l);
      return it != truth.end() && it->second;
    });
  }

  // Leaves of one minimal satisfying assignment: all operands of a satisfied
  // conjunction, the first satisfied operand of a disjunction. Returns false
  // (and appends nothing) when the expression is unsatisfied.
  template <typename Truth>
    requires std::predicate<Truth&, const LinkId&>
  bool satisfying_leaves(Truth&& truth, std::vector<LinkId>& out) const {
    switch (kind_) {
      case Kind::Empty:
        return false;
      case Kind::Leaf:
        if (truth(link_)) {
          out.push_back(link_);
          return true;
        }
        return false;
      case Kind::And: {
        const std::size_t mark = out.size();
        for (const LogicExpr& c : children_) {
          if (!c.satisfying_leaves(truth, out)) {
            out.resize(mark);
            return false;
          }
        }
        return true;
      }
      case Kind::Or:
        for (const LogicExpr& c : children_)
          if (c.satisfying_leaves(truth, out)) return true;
        return false;
    }
    return false;
  }

  void leaves(std::vector<LinkId>& out) const {
    switch (kind_) {
      case Kind::Empty:
        return;
      case Kind::Leaf:
        out.push_back(link_);
        return;
      case Kind::And:
      case Kind::Or:
        for (const LogicExpr& c : children_) c.leaves(out);
        return;
    }
  }

  std::vector<LinkId> leaves() const {
    std::vector<LinkId> out;
    leaves(out);
    return out;
  }

  std::size_t leaf_count() const {
    if (kind_ == Kind::Empty) return 0;
    if (kind_ == Kind::Leaf) return 1;
    std::size_t n = 0;
    for (const LogicExpr& c : children_) n += c.leaf_count();
    return n;
  }

 private:
  static LogicExpr combine(Kind kind, std::vector<LogicExpr> operands) {
    if (operands.empty())
      throw ValidationError("logic operator requires at least one operand");
    for (const LogicExpr& c : operands)
      if (c.is_empty())
        throw ValidationError("logic operator over an empty expression");
    if (operands.size() == 1) return std::move(operands.front());
    LogicExpr e;
    e.kind_ = kind;
    e.children_ = std::move(operands);
    return e;
  }

  Kind kind_ = Kind::Empty;
  LinkId link_;
  std::vector<LogicExpr> children_;
};

}  // namespace ern
