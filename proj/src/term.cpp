#include <jetad/term.hpp>

#include <stdexcept>

namespace jetad::mk {

namespace {

template <typename T>
Term make(T&& data)
{
    return Term{std::make_shared<const TermNode>(TermNode{std::forward<T>(data)})};
}

} // namespace

Term var(std::string name) { return make(node::Var{std::move(name)}); }
Term lit(double value) { return make(node::Const{value}); }
Term op(std::string name, std::vector<Term> args) { return make(node::OpApp{std::move(name), std::move(args)}); }
Term add(Term a, Term b) { return op("+", {std::move(a), std::move(b)}); }
Term mul(Term a, Term b) { return op("*", {std::move(a), std::move(b)}); }
Term tuple(std::vector<Term> items) { return make(node::Tuple{std::move(items)}); }

Term match(Term scrutinee, std::vector<std::string> binders, Term body)
{
    return make(node::TupleMatch{std::move(scrutinee), std::move(binders), std::move(body)});
}

Term lambda(std::string binder, std::optional<Type> annotation, Term body)
{
    return make(node::Lambda{std::move(binder), std::move(annotation), std::move(body)});
}

Term app(Term fn, Term arg) { return make(node::App{std::move(fn), std::move(arg)}); }

Term inject(Type variant, std::string ctor, Term payload)
{
    return make(node::Inject{std::move(variant), std::move(ctor), std::move(payload)});
}

Term case_of(Term scrutinee, std::vector<node::CaseBranch> branches)
{
    return make(node::Case{std::move(scrutinee), std::move(branches)});
}

Term nil(std::optional<Type> element) { return make(node::Nil{std::move(element)}); }
Term cons(Term head, Term tail) { return make(node::Cons{std::move(head), std::move(tail)}); }

Term fold(std::string elem, std::string acc, Term step, Term list, Term init)
{
    return make(node::Fold{std::move(elem), std::move(acc), std::move(step), std::move(list), std::move(init)});
}

Term let(std::string binder, Term value, Term body)
{
    return app(lambda(std::move(binder), std::nullopt, std::move(body)), std::move(value));
}

Term minus(Term t, Term u) { return add(std::move(t), mul(lit(-1.0), std::move(u))); }

Term scale(unsigned n, Term t)
{
    if (n == 0) throw std::invalid_argument("scale: n must be at least 1");
    Term acc = t;
    for (unsigned i = 1; i < n; ++i) acc = add(acc, t);
    return acc;
}

Term power(Term t, unsigned n)
{
    if (n == 0) throw std::invalid_argument("power: n must be at least 1");
    Term acc = t;
    for (unsigned i = 1; i < n; ++i) acc = mul(acc, t);
    return acc;
}

Term sum(std::vector<Term> terms)
{
    if (terms.empty()) return lit(0.0);
    Term acc = terms.front();
    for (std::size_t i = 1; i < terms.size(); ++i) acc = add(acc, terms[i]);
    return acc;
}

Term product(std::vector<Term> factors)
{
    if (factors.empty()) return lit(1.0);
    Term acc = factors.front();
    for (std::size_t i = 1; i < factors.size(); ++i) acc = mul(acc, factors[i]);
    return acc;
}

} // namespace jetad::mk
