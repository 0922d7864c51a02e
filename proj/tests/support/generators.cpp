#include "support/generators.hpp"

#include <algorithm>
#include <cmath>

namespace jetad::fuzz {

namespace {

const std::vector<std::string> binder_pool{"a", "b", "c", "d", "x", "y", "u"};
const std::vector<std::string> ctor_pool{"A", "B", "C"};

} // namespace

double TermGen::real_value()
{
    // Short decimals keep printed terms readable; negatives exercise (-n).
    static const std::vector<double> nice{0.0, 1.0, -1.0, 0.5, 2.0, -0.25, 3.0, 1.5};
    if (coin(0.7)) return nice[below(nice.size())];
    return std::round(std::uniform_real_distribution<double>(-4.0, 4.0)(rng_) * 1000.0) / 1000.0;
}

std::string TermGen::binder() { return binder_pool[below(binder_pool.size())]; }

Type TermGen::random_type(int depth)
{
    if (depth <= 0 || coin(0.45)) return Type::real();
    switch (below(4)) {
    case 0: {
        std::vector<Type> cs;
        const auto n = 1 + below(3);
        for (std::size_t i = 0; i < n; ++i) cs.push_back(random_type(depth - 1));
        return Type::product(std::move(cs));
    }
    case 1:
        return Type::function(random_type(depth - 1), random_type(depth - 1));
    case 2: {
        std::vector<std::pair<std::string, Type>> cs;
        const auto n = 1 + below(3);
        for (std::size_t i = 0; i < n; ++i) cs.emplace_back(ctor_pool[i], random_type(depth - 1));
        return Type::variant(std::move(cs));
    }
    default:
        return Type::list(random_type(depth - 1));
    }
}

std::vector<std::string> TermGen::vars_of(const Type& type, const Env& env) const
{
    std::vector<std::string> out;
    for (std::size_t i = 0; i < env.size(); ++i) {
        const auto& [name, t] = env[i];
        bool shadowed = false;
        for (std::size_t j = i + 1; j < env.size(); ++j)
            if (env[j].first == name) shadowed = true;
        if (!shadowed && t == type && std::find(out.begin(), out.end(), name) == out.end()) out.push_back(name);
    }
    return out;
}

Term TermGen::leaf(const Type& type, const Env& env, int depth)
{
    auto vars = vars_of(type, env);
    if (!vars.empty() && coin(0.7)) return mk::var(vars[below(vars.size())]);
    return intro(type, env, std::min(depth, 1));
}

Term TermGen::intro(const Type& type, const Env& env, int depth)
{
    const int d = depth - 1;
    switch (type.kind()) {
    case Type::Kind::real: {
        if (d < 0 || coin(0.3)) return mk::lit(real_value());
        switch (below(3)) {
        case 0: return mk::add(term_of(type, env, d), term_of(type, env, d));
        case 1: return mk::mul(term_of(type, env, d), term_of(type, env, d));
        default: return mk::op("sigmoid", {term_of(type, env, d)});
        }
    }
    case Type::Kind::product: {
        std::vector<Term> items;
        for (const auto& c : type.components()) items.push_back(term_of(c, env, d));
        return mk::tuple(std::move(items));
    }
    case Type::Kind::function: {
        auto x = binder();
        Env inner = env;
        inner.emplace_back(x, type.domain());
        return mk::lambda(x, type.domain(), term_of(type.codomain(), inner, d));
    }
    case Type::Kind::variant: {
        auto i = below(type.components().size());
        return mk::inject(type, type.constructor_names()[i], term_of(type.components()[i], env, d));
    }
    case Type::Kind::list: {
        if (d < 0 || coin(0.35)) return mk::nil(type.element());
        Term head = term_of(type.element(), env, d);
        Term tail = coin(0.5) ? mk::nil() : term_of(type, env, d);
        return mk::cons(head, tail);
    }
    }
    return mk::lit(0);
}

Term TermGen::elim(const Type& type, const Env& env, int depth)
{
    const int d = depth - 1;
    switch (below(5)) {
    case 0: { // let
        Type s = random_type(1);
        Term value = term_of(s, env, d);
        auto x = binder();
        Env inner = env;
        inner.emplace_back(x, s);
        return mk::let(x, value, term_of(type, inner, d));
    }
    case 1: { // tuple match
        std::vector<Type> cs;
        const auto n = 1 + below(3);
        for (std::size_t i = 0; i < n; ++i) cs.push_back(random_type(1));
        Type s = Type::product(cs);
        Term scrutinee = term_of(s, env, d);
        std::vector<std::string> binders;
        Env inner = env;
        for (std::size_t i = 0; i < n; ++i) {
            std::string x;
            do x = binder();
            while (std::find(binders.begin(), binders.end(), x) != binders.end());
            binders.push_back(x);
            inner.emplace_back(x, cs[i]);
        }
        return mk::match(scrutinee, binders, term_of(type, inner, d));
    }
    case 2: { // application
        Type s = random_type(1);
        return mk::app(term_of(Type::function(s, type), env, d), term_of(s, env, d));
    }
    case 3: { // case
        Type s = random_type(2);
        if (!s.is_variant()) s = Type::variant({{"A", Type::real()}, {"B", random_type(1)}});
        Term scrutinee = term_of(s, env, d);
        std::vector<node::CaseBranch> branches;
        for (std::size_t i = 0; i < s.components().size(); ++i) {
            auto x = binder();
            Env inner = env;
            inner.emplace_back(x, s.components()[i]);
            branches.push_back({s.constructor_names()[i], x, term_of(type, inner, d)});
        }
        // Branch order is free in the surface syntax.
        if (branches.size() > 1 && coin(0.3)) std::swap(branches.front(), branches.back());
        return mk::case_of(scrutinee, std::move(branches));
    }
    default: { // fold
        Type e = random_type(1);
        Term list = term_of(Type::list(e), env, d);
        Term init = term_of(type, env, d);
        auto x = binder();
        std::string acc;
        do acc = binder();
        while (acc == x);
        Env inner = env;
        inner.emplace_back(x, e);
        inner.emplace_back(acc, type);
        return mk::fold(x, acc, term_of(type, inner, d), list, init);
    }
    }
}

Term TermGen::term_of(const Type& type, const Env& env, int depth)
{
    if (depth <= 0) return leaf(type, env, 0);
    const double r = std::uniform_real_distribution<double>(0, 1)(rng_);
    if (r < 0.2) return leaf(type, env, depth);
    if (r < 0.6) return intro(type, env, depth);
    return elim(type, env, depth);
}

Context TermGen::random_context()
{
    Context ctx;
    static const std::vector<std::string> names{"u", "v", "w"};
    const auto n = 1 + below(3);
    for (std::size_t i = 0; i < n; ++i) ctx.add(names[i], i == 0 ? Type::real() : random_type(1));
    return ctx;
}

TermGen::Sample TermGen::sample_of(const Type& type)
{
    Context ctx = random_context();
    Env env(ctx.entries().begin(), ctx.entries().end());
    Term t = term_of(type, env, 1 + static_cast<int>(below(static_cast<std::size_t>(max_depth_))));
    return {ctx, t, type};
}

TermGen::Sample TermGen::sample() { return sample_of(random_type(2)); }

} // namespace jetad::fuzz
