#include <jetad/ad_macro.hpp>
#include <jetad/detail/overloaded.hpp>
#include <jetad/primops.hpp>
#include <jetad/syntax.hpp>

#include <algorithm>

namespace jetad {

void MacroConfig::validate() const
{
    if (k < 1) throw MacroError("jet dimension k must be at least 1");
    if (order < 1) throw MacroError("jet order R must be at least 1");
    if (mode == Mode::restricted22 && (k != 2 || order != 2))
        throw MacroError("restricted22 mode needs (k,R) = (2,2)");
    if (k > 9) throw MacroError("k > 9 is not supported (multi-index digits)");
    if (ops().max_order() < order)
        throw MacroError("op registry has derivatives up to order " + std::to_string(ops().max_order()) +
                         ", order " + std::to_string(order) + " requested");
}

const Registry& MacroConfig::ops() const { return registry ? *registry : default_registry(); }

JetShape MacroConfig::shape() const
{
    return mode == Mode::restricted22 ? JetShape::restricted22() : JetShape::full(k, order);
}

namespace {

Type d_type_with(std::size_t n, const Type& t)
{
    switch (t.kind()) {
    case Type::Kind::real:
        return Type::real_power(n);
    case Type::Kind::product: {
        std::vector<Type> cs;
        for (const auto& c : t.components()) cs.push_back(d_type_with(n, c));
        return Type::product(std::move(cs));
    }
    case Type::Kind::function:
        return Type::function(d_type_with(n, t.domain()), d_type_with(n, t.codomain()));
    case Type::Kind::variant: {
        std::vector<std::pair<std::string, Type>> cs;
        for (std::size_t i = 0; i < t.components().size(); ++i)
            cs.emplace_back(t.constructor_names()[i], d_type_with(n, t.components()[i]));
        return Type::variant(std::move(cs));
    }
    case Type::Kind::list:
        return Type::list(d_type_with(n, t.element()));
    }
    return t;
}

class Macro
{
public:
    explicit Macro(const MacroConfig& cfg) : cfg_(cfg), reg_(cfg.ops()), shape_(cfg.shape()) {}

    Term go(const Term& t)
    {
        return t.visit(detail::overloaded{
            [&](const node::Var&) { return t; },
            [&](const node::Const&) {
                std::vector<Term> items{t};
                for (std::size_t c = 1; c < shape_.size(); ++c) items.push_back(mk::lit(0));
                return mk::tuple(std::move(items));
            },
            [&](const node::OpApp& o) { return op(o); },
            [&](const node::Tuple& tu) {
                std::vector<Term> items;
                for (const auto& i : tu.items) items.push_back(go(i));
                return mk::tuple(std::move(items));
            },
            [&](const node::TupleMatch& m) { return mk::match(go(m.scrutinee), m.binders, go(m.body)); },
            [&](const node::Lambda& l) {
                std::optional<Type> ann;
                if (l.annotation) ann = type(*l.annotation);
                return mk::lambda(l.binder, std::move(ann), go(l.body));
            },
            [&](const node::App& a) { return mk::app(go(a.fn), go(a.arg)); },
            [&](const node::Inject& i) { return mk::inject(type(i.variant), i.ctor, go(i.payload)); },
            [&](const node::Case& c) {
                std::vector<node::CaseBranch> bs;
                for (const auto& b : c.branches) bs.push_back({b.ctor, b.binder, go(b.body)});
                return mk::case_of(go(c.scrutinee), std::move(bs));
            },
            [&](const node::Nil& n) {
                if (n.element) return mk::nil(type(*n.element));
                return mk::nil();
            },
            [&](const node::Cons& c) { return mk::cons(go(c.head), go(c.tail)); },
            [&](const node::Fold& f) { return mk::fold(f.elem, f.acc, go(f.step), go(f.list), go(f.init)); },
        });
    }

private:
    const MacroConfig& cfg_;
    const Registry& reg_;
    JetShape shape_;

    Type type(const Type& t) const { return d_type_with(shape_.size(), t); }

    Term op(const node::OpApp& o)
    {
        const OpSpec* spec = reg_.find(o.op);
        if (!spec) throw MacroError("unregistered operation '" + o.op + "'");
        if (spec->arity != o.args.size())
            throw MacroError("'" + o.op + "' applied to " + std::to_string(o.args.size()) + " arguments, arity is " +
                             std::to_string(spec->arity));
        const std::size_t n = o.args.size();
        const std::size_t size = shape_.size();

        // names[j][c]: the c-th jet coordinate of argument j.
        std::vector<std::vector<std::string>> names(n);
        for (std::size_t j = 0; j < n; ++j)
            for (const auto& alpha : shape_.coords())
                names[j].push_back(fresh_name("x%" + std::to_string(j + 1) + "_" + alpha.digits()));

        std::vector<Term> values;
        std::map<std::string, Term> at_values;
        for (std::size_t j = 0; j < n; ++j) {
            values.push_back(mk::var(names[j][0]));
            at_values.emplace(argument_name(j), mk::var(names[j][0]));
        }

        std::vector<Term> slots;
        slots.push_back(mk::op(o.op, values));
        for (std::size_t c = 1; c < size; ++c) {
            const auto& alpha = shape_.coords()[c];
            std::vector<Term> summands;
            for (const auto& term : enumerate_fdb(alpha, n)) {
                std::vector<Term> factors;
                const long long coeff = term.integer_coefficient();
                if (coeff != 1) factors.push_back(mk::lit(static_cast<double>(coeff)));
                // Higher-order parts first, e.g. x_10 * x_01, as in the usual display.
                for (auto f = term.factors.rbegin(); f != term.factors.rend(); ++f) {
                    const auto idx = shape_.index_of(f->part);
                    if (!idx) throw MacroError("jet shape lacks coordinate " + f->part.digits());
                    for (std::size_t j = 0; j < n; ++j)
                        for (unsigned e = 0; e < f->exponents[j]; ++e) factors.push_back(mk::var(names[j][*idx]));
                }
                factors.push_back(substitute_many(derivative(*spec, term.beta), at_values));
                summands.push_back(mk::product(std::move(factors)));
            }
            slots.push_back(mk::sum(std::move(summands)));
        }

        Term body = mk::tuple(std::move(slots));
        for (std::size_t j = n; j-- > 0;) body = mk::match(go(o.args[j]), names[j], body);
        return body;
    }

    const Term& derivative(const OpSpec& spec, const MultiIndex& beta) const
    {
        auto it = spec.derivatives.find(beta);
        if (it == spec.derivatives.end())
            throw MacroError("'" + spec.name + "' has no derivative " + beta.digits() + " in the registry");
        return it->second;
    }
};

} // namespace

Type d_type(const MacroConfig& cfg, const Type& type)
{
    cfg.validate();
    return d_type_with(cfg.shape().size(), type);
}

Context d_context(const MacroConfig& cfg, const Context& ctx)
{
    cfg.validate();
    Context out;
    for (const auto& [name, type] : ctx.entries()) out.add(name, d_type_with(cfg.shape().size(), type));
    return out;
}

Term d_term(const MacroConfig& cfg, const Term& term)
{
    cfg.validate();
    return Macro(cfg).go(term);
}

Term d_term_restricted22(const MacroConfig& cfg, const Term& term)
{
    if (cfg.mode != MacroConfig::Mode::restricted22) throw MacroError("d_term_restricted22 needs restricted22 mode");
    return d_term(cfg, term);
}

// ---------------------------------------------------------------------------
// normalisation
// ---------------------------------------------------------------------------

namespace {

bool trivial(const Term& t)
{
    if (t.is<node::Var>() || t.is<node::Const>()) return true;
    if (const auto* tu = t.as<node::Tuple>())
        return std::all_of(tu->items.begin(), tu->items.end(), [](const Term& i) { return i.is<node::Var>() || i.is<node::Const>(); });
    return false;
}

class Normalizer
{
public:
    bool changed = false;

    Term go(const Term& t)
    {
        return t.visit(detail::overloaded{
            [&](const node::Var&) { return t; },
            [&](const node::Const&) { return t; },
            [&](const node::Nil&) { return t; },
            [&](const node::OpApp& o) {
                std::vector<Term> args;
                for (const auto& a : o.args) args.push_back(go(a));
                return mk::op(o.op, std::move(args));
            },
            [&](const node::Tuple& tu) {
                std::vector<Term> items;
                for (const auto& i : tu.items) items.push_back(go(i));
                return mk::tuple(std::move(items));
            },
            [&](const node::TupleMatch& m) { return match(go(m.scrutinee), m.binders, go(m.body)); },
            [&](const node::Lambda& l) { return mk::lambda(l.binder, l.annotation, go(l.body)); },
            [&](const node::App& a) {
                Term fn = go(a.fn);
                Term arg = go(a.arg);
                if (const auto* l = fn.as<node::Lambda>()) {
                    if (trivial(arg) || count_free(l->body, l->binder) <= 1) {
                        changed = true;
                        return substitute(l->body, l->binder, arg);
                    }
                }
                return mk::app(fn, arg);
            },
            [&](const node::Inject& i) { return mk::inject(i.variant, i.ctor, go(i.payload)); },
            [&](const node::Case& c) {
                std::vector<node::CaseBranch> bs;
                for (const auto& b : c.branches) bs.push_back({b.ctor, b.binder, go(b.body)});
                return mk::case_of(go(c.scrutinee), std::move(bs));
            },
            [&](const node::Cons& c) { return mk::cons(go(c.head), go(c.tail)); },
            [&](const node::Fold& f) { return mk::fold(f.elem, f.acc, go(f.step), go(f.list), go(f.init)); },
        });
    }

private:
    // match <t1..tn> with <x1..xn> -> body: substitute the components that
    // may be duplicated or moved, keep a smaller match for the rest.
    Term match(const Term& scrutinee, const std::vector<std::string>& binders, const Term& body)
    {
        const auto* tu = scrutinee.as<node::Tuple>();
        if (!tu || tu->items.size() != binders.size()) return mk::match(scrutinee, binders, body);

        std::map<std::string, Term> subst;
        std::vector<Term> kept_items;
        std::vector<std::string> kept_binders;
        for (std::size_t i = 0; i < binders.size(); ++i) {
            const auto& item = tu->items[i];
            if (trivial(item) || count_free(body, binders[i]) <= 1) {
                subst.emplace(binders[i], item);
            } else {
                // Renamed so that substituted components cannot be captured.
                auto fresh = fresh_name(binders[i]);
                subst.emplace(binders[i], mk::var(fresh));
                kept_items.push_back(item);
                kept_binders.push_back(fresh);
            }
        }
        if (kept_items.size() == binders.size()) return mk::match(scrutinee, binders, body);
        changed = true;
        Term out = substitute_many(body, subst);
        if (!kept_items.empty()) out = mk::match(mk::tuple(std::move(kept_items)), std::move(kept_binders), out);
        return out;
    }
};

} // namespace

Term normalize(const Term& term)
{
    Term t = term;
    for (;;) {
        Normalizer n;
        t = n.go(t);
        if (!n.changed) return t;
    }
}

} // namespace jetad
