#pragma once

#include <jetad/type.hpp>

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace jetad {

struct TermNode;

/// Object-language term. Immutable and shareable; equality of terms is
/// alpha_eq (see syntax.hpp), never pointer identity.
class Term
{
public:
    explicit Term(std::shared_ptr<const TermNode> node) : node_(std::move(node)) {}

    const TermNode& node() const noexcept { return *node_; }

    template <typename T>
    const T* as() const noexcept;

    template <typename T>
    bool is() const noexcept
    {
        return as<T>() != nullptr;
    }

    template <typename Visitor>
    decltype(auto) visit(Visitor&& visitor) const;

    /// Same underlying node.
    bool same(const Term& other) const noexcept { return node_ == other.node_; }

private:
    std::shared_ptr<const TermNode> node_;
};

namespace node {

struct Var
{
    std::string name;
};

/// A real literal; the 0-ary constant operation it names.
struct Const
{
    double value = 0.0;
};

struct OpApp
{
    std::string op;
    std::vector<Term> args;
};

struct Tuple
{
    std::vector<Term> items;
};

struct TupleMatch
{
    Term scrutinee;
    std::vector<std::string> binders;
    Term body;
};

/// An unannotated lambda only typechecks as the head of an application;
/// that is how `let x = t in u` is represented.
struct Lambda
{
    std::string binder;
    std::optional<Type> annotation;
    Term body;
};

struct App
{
    Term fn;
    Term arg;
};

struct Inject
{
    Type variant;
    std::string ctor;
    Term payload;
};

struct CaseBranch
{
    std::string ctor;
    std::string binder;
    Term body;
};

struct Case
{
    Term scrutinee;
    std::vector<CaseBranch> branches;
};

struct Nil
{
    /// Element type from a `nil : list T` ascription.
    std::optional<Type> element;
};

struct Cons
{
    Term head;
    Term tail;
};

/// Right fold: fold (elem, acc -> step) over list from init.
struct Fold
{
    std::string elem;
    std::string acc;
    Term step;
    Term list;
    Term init;
};

} // namespace node

struct TermNode
{
    using Variant = std::variant<node::Var, node::Const, node::OpApp, node::Tuple, node::TupleMatch, node::Lambda,
                                 node::App, node::Inject, node::Case, node::Nil, node::Cons, node::Fold>;
    Variant data;
};

template <typename T>
const T* Term::as() const noexcept
{
    return std::get_if<T>(&node_->data);
}

template <typename Visitor>
decltype(auto) Term::visit(Visitor&& visitor) const
{
    return std::visit(std::forward<Visitor>(visitor), node_->data);
}

/// Term constructors, including the sugar forms (`let`, minus, scaling, powers).
namespace mk {

Term var(std::string name);
Term lit(double value);
Term op(std::string name, std::vector<Term> args);
Term add(Term a, Term b);
Term mul(Term a, Term b);
Term tuple(std::vector<Term> items);
Term match(Term scrutinee, std::vector<std::string> binders, Term body);
Term lambda(std::string binder, std::optional<Type> annotation, Term body);
Term app(Term fn, Term arg);
Term inject(Type variant, std::string ctor, Term payload);
Term case_of(Term scrutinee, std::vector<node::CaseBranch> branches);
Term nil(std::optional<Type> element = std::nullopt);
Term cons(Term head, Term tail);
Term fold(std::string elem, std::string acc, Term step, Term list, Term init);

/// (fun x -> body) value, binder type taken from the argument.
Term let(std::string binder, Term value, Term body);
/// t + (-1) * u
Term minus(Term t, Term u);
/// t + ... + t (n times); n >= 1.
Term scale(unsigned n, Term t);
/// t * ... * t (n times); n >= 1.
Term power(Term t, unsigned n);
/// Left-nested sum; literal 0 when empty.
Term sum(std::vector<Term> terms);
/// Left-nested product; literal 1 when empty.
Term product(std::vector<Term> factors);

} // namespace mk

} // namespace jetad
