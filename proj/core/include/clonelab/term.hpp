#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "clonelab/ops.hpp"

namespace clonelab {

class Term;
using TermPtr = std::shared_ptr<const Term>;

/// An auditable term over named input operations built from projections,
/// minors and compositions. Terms form a DAG; shared subterms are evaluated once.
class Term {
 public:
  enum class Kind { input, projection, minor, compose };

  static TermPtr input(std::string name, std::size_t arity);
  /// 0-based coordinate.
  static TermPtr projection(std::size_t arity, std::size_t index);
  static TermPtr minor(TermPtr of, VarMap map);
  static TermPtr compose(TermPtr head, std::vector<TermPtr> args);

  Kind kind() const noexcept { return kind_; }
  std::size_t arity() const noexcept { return arity_; }
  const std::string& name() const noexcept { return name_; }
  std::size_t index() const noexcept { return index_; }
  const VarMap& map() const noexcept { return map_; }
  const TermPtr& head() const noexcept { return head_; }
  const std::vector<TermPtr>& args() const noexcept { return args_; }

 private:
  Term() = default;

  Kind kind_ = Kind::input;
  std::size_t arity_ = 0;
  std::string name_;
  std::size_t index_ = 0;
  VarMap map_;
  TermPtr head_;
  std::vector<TermPtr> args_;
};

using Inputs = std::map<std::string, Operation>;

/// Evaluates terms using only make_projection, minor and compose. Results are
/// memoized per node, so evaluating several terms that share subterms through
/// one evaluator costs each shared node once.
class TermEvaluator {
 public:
  explicit TermEvaluator(Inputs inputs);

  const Operation& operator()(const TermPtr& term);
  const Inputs& inputs() const noexcept { return inputs_; }

 private:
  Inputs inputs_;
  std::size_t domain_;
  std::map<const Term*, std::pair<TermPtr, Operation>> memo_;
};

Operation evaluate(const TermPtr& term, const Inputs& inputs);

/// Number of distinct nodes in the DAG.
std::size_t node_count(const TermPtr& term);

}  // namespace clonelab
