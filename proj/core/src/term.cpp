#include "clonelab/term.hpp"

#include <optional>
#include <unordered_map>
#include <unordered_set>

namespace clonelab {

TermPtr Term::input(std::string name, std::size_t arity) {
  auto t = std::shared_ptr<Term>(new Term());
  t->kind_ = Kind::input;
  t->name_ = std::move(name);
  t->arity_ = arity;
  return t;
}

TermPtr Term::projection(std::size_t arity, std::size_t index) {
  if (index >= arity) throw InvalidArgument("term projection index out of range");
  auto t = std::shared_ptr<Term>(new Term());
  t->kind_ = Kind::projection;
  t->arity_ = arity;
  t->index_ = index;
  return t;
}

TermPtr Term::minor(TermPtr of, VarMap map) {
  if (map.source_arity() != of->arity()) throw InvalidArgument("term minor: arity mismatch");
  auto t = std::shared_ptr<Term>(new Term());
  t->kind_ = Kind::minor;
  t->arity_ = map.target_arity;
  t->head_ = std::move(of);
  t->map_ = std::move(map);
  return t;
}

TermPtr Term::compose(TermPtr head, std::vector<TermPtr> args) {
  if (args.size() != head->arity()) throw InvalidArgument("term compose: arity mismatch");
  if (args.empty()) throw InvalidArgument("term compose: no arguments");
  for (const auto& a : args) {
    if (a->arity() != args.front()->arity()) {
      throw InvalidArgument("term compose: argument arities differ");
    }
  }
  auto t = std::shared_ptr<Term>(new Term());
  t->kind_ = Kind::compose;
  t->arity_ = args.front()->arity();
  t->head_ = std::move(head);
  t->args_ = std::move(args);
  return t;
}

TermEvaluator::TermEvaluator(Inputs inputs) : inputs_(std::move(inputs)) {
  if (inputs_.empty()) throw InvalidArgument("evaluate: no inputs to fix the domain");
  domain_ = inputs_.begin()->second.domain();
  for (const auto& [name, op] : inputs_) {
    if (op.domain() != domain_) throw InvalidArgument("evaluate: inputs mix domain sizes");
  }
}

const Operation& TermEvaluator::operator()(const TermPtr& t) {
  if (auto it = memo_.find(t.get()); it != memo_.end()) return it->second.second;
  std::optional<Operation> value;
  switch (t->kind()) {
    case Term::Kind::input: {
      auto it = inputs_.find(t->name());
      if (it == inputs_.end()) throw InvalidArgument("term input '" + t->name() + "' not bound");
      if (it->second.arity() != t->arity()) {
        throw InvalidArgument("term input '" + t->name() + "' has the wrong arity");
      }
      value = it->second;
      break;
    }
    case Term::Kind::projection:
      value = make_projection(domain_, t->arity(), t->index() + 1);
      break;
    case Term::Kind::minor:
      value = clonelab::minor((*this)(t->head()), t->map());
      break;
    case Term::Kind::compose: {
      std::vector<Operation> args;
      args.reserve(t->args().size());
      for (const auto& a : t->args()) args.push_back((*this)(a));
      value = clonelab::compose((*this)(t->head()), args);
      break;
    }
  }
  // The TermPtr is kept alive so node addresses stay unique while memoized.
  return memo_.emplace(t.get(), std::make_pair(t, std::move(*value))).first->second.second;
}

Operation evaluate(const TermPtr& term, const Inputs& inputs) {
  TermEvaluator ev(inputs);
  return ev(term);
}

std::size_t node_count(const TermPtr& term) {
  std::unordered_set<const Term*> seen;
  std::vector<const Term*> stack{term.get()};
  while (!stack.empty()) {
    const Term* t = stack.back();
    stack.pop_back();
    if (!seen.insert(t).second) continue;
    if (t->head()) stack.push_back(t->head().get());
    for (const auto& a : t->args()) stack.push_back(a.get());
  }
  return seen.size();
}

}  // namespace clonelab
