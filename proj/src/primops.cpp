#include <jetad/parser.hpp>
#include <jetad/primops.hpp>
#include <jetad/syntax.hpp>
#include <jetad/typecheck.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace jetad {

std::string argument_name(std::size_t i) { return "x" + std::to_string(i + 1); }

namespace {

// Checks that every op used in `t` satisfies `known`.
template <typename Known>
void check_ops(const Term& t, Known&& known, const std::string& owner)
{
    t.visit([&](const auto& n) {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, node::OpApp>) {
            if (!known(n.op)) throw RegistryError("derivative of '" + owner + "' uses unregistered op '" + n.op + "'");
            for (const auto& a : n.args) check_ops(a, known, owner);
        } else if constexpr (std::is_same_v<N, node::Tuple>) {
            for (const auto& a : n.items) check_ops(a, known, owner);
        } else if constexpr (std::is_same_v<N, node::TupleMatch>) {
            check_ops(n.scrutinee, known, owner);
            check_ops(n.body, known, owner);
        } else if constexpr (std::is_same_v<N, node::Lambda>) {
            check_ops(n.body, known, owner);
        } else if constexpr (std::is_same_v<N, node::App>) {
            check_ops(n.fn, known, owner);
            check_ops(n.arg, known, owner);
        } else if constexpr (std::is_same_v<N, node::Inject>) {
            check_ops(n.payload, known, owner);
        } else if constexpr (std::is_same_v<N, node::Case>) {
            check_ops(n.scrutinee, known, owner);
            for (const auto& b : n.branches) check_ops(b.body, known, owner);
        } else if constexpr (std::is_same_v<N, node::Cons>) {
            check_ops(n.head, known, owner);
            check_ops(n.tail, known, owner);
        } else if constexpr (std::is_same_v<N, node::Fold>) {
            check_ops(n.step, known, owner);
            check_ops(n.list, known, owner);
            check_ops(n.init, known, owner);
        }
    });
}

} // namespace

void Registry::register_op(OpSpec spec)
{
    if (spec.name.empty()) throw RegistryError("op name must not be empty");
    if (ops_.contains(spec.name)) throw RegistryError("op '" + spec.name + "' is already registered");
    if (!spec.numeric) throw RegistryError("op '" + spec.name + "' has no numeric implementation");

    for (const auto& [beta, term] : spec.derivatives) {
        if (beta.dims() != spec.arity || beta.is_zero() || beta.degree() > max_order_)
            throw RegistryError("op '" + spec.name + "': derivative index " + beta.digits() + " is out of range");
    }
    if (spec.arity > 0) {
        for (const auto& beta : multi_indices_up_to(spec.arity, max_order_)) {
            if (beta.is_zero()) continue;
            if (!spec.derivatives.contains(beta))
                throw RegistryError("op '" + spec.name + "' is missing derivative " + beta.digits());
        }
    }

    // The op is visible to its own derivative terms.
    Registry with_self(max_order_);
    with_self.ops_ = ops_;
    OpSpec self{spec.name, spec.arity, spec.numeric, {}};
    with_self.ops_.emplace(spec.name, self);

    Context args;
    for (std::size_t i = 0; i < spec.arity; ++i) args.add(argument_name(i), Type::real());
    for (const auto& [beta, term] : spec.derivatives) {
        check_ops(term, [&](const std::string& op) { return with_self.contains(op); }, spec.name);
        for (const auto& v : free_vars(term))
            if (!args.contains(v))
                throw RegistryError("derivative " + beta.digits() + " of '" + spec.name + "' has free variable '" + v + "'");
        try {
            check(args, term, Type::real(), &with_self);
        } catch (const TypeError& e) {
            throw RegistryError("derivative " + beta.digits() + " of '" + spec.name + "' is ill-typed: " + e.what());
        }
    }
    auto name = spec.name;
    ops_.emplace(std::move(name), std::move(spec));
}

const OpSpec* Registry::find(std::string_view name) const
{
    auto it = ops_.find(name);
    return it == ops_.end() ? nullptr : &it->second;
}

const OpSpec& Registry::at(std::string_view name) const
{
    if (const auto* s = find(name)) return *s;
    throw RegistryError("unknown op '" + std::string(name) + "'");
}

const Term& Registry::derivative(std::string_view name, const MultiIndex& beta) const
{
    const auto& spec = at(name);
    auto it = spec.derivatives.find(beta);
    if (it == spec.derivatives.end())
        throw RegistryError("op '" + spec.name + "' has no derivative " +
                            (beta.dims() == spec.arity ? beta.digits() : std::string("of that shape")));
    return it->second;
}

const Term& Registry::derivative_by_slots(std::string_view name, std::vector<std::size_t> slots) const
{
    const auto& spec = at(name);
    auto beta = MultiIndex::zero(spec.arity);
    for (auto s : slots) {
        if (s >= spec.arity) throw RegistryError("slot out of range for '" + spec.name + "'");
        ++beta[s];
    }
    return derivative(name, beta);
}

std::vector<std::string> Registry::names() const
{
    std::vector<std::string> out;
    for (const auto& [n, s] : ops_) out.push_back(n);
    return out;
}

// ---------------------------------------------------------------------------
// builtins
// ---------------------------------------------------------------------------

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

} // namespace

Registry builtin_registry(unsigned max_order)
{
    if (max_order > 2) throw RegistryError("builtin derivative tables only go up to order 2");
    Registry reg(max_order);
    const Term x1 = mk::var("x1"), x2 = mk::var("x2");
    auto upto = [&](std::map<MultiIndex, Term> all) {
        std::map<MultiIndex, Term> out;
        for (auto& [beta, t] : all)
            if (beta.degree() <= max_order) out.emplace(beta, t);
        return out;
    };

    reg.register_op({"+", 2, [](std::span<const double> a) { return a[0] + a[1]; },
                     upto({{{1, 0}, mk::lit(1)},
                           {{0, 1}, mk::lit(1)},
                           {{2, 0}, mk::lit(0)},
                           {{1, 1}, mk::lit(0)},
                           {{0, 2}, mk::lit(0)}})});

    reg.register_op({"*", 2, [](std::span<const double> a) { return a[0] * a[1]; },
                     upto({{{1, 0}, x2},
                           {{0, 1}, x1},
                           {{2, 0}, mk::lit(0)},
                           {{1, 1}, mk::lit(1)},
                           {{0, 2}, mk::lit(0)}})});

    // sigma' = y(1-y), sigma'' = y(1-y)(1-2y) with y = sigma(x1).
    const Term y = mk::var("y"), z = mk::var("z");
    const Term s = mk::op("sigmoid", {x1});
    const Term first = mk::let("y", s, mk::mul(y, mk::minus(mk::lit(1), y)));
    const Term second = mk::let(
        "y", s,
        mk::let("z", mk::mul(y, mk::minus(mk::lit(1), y)), mk::mul(z, mk::minus(mk::lit(1), mk::mul(mk::lit(2), y)))));
    reg.register_op({"sigmoid", 1, [](std::span<const double> a) { return sigmoid(a[0]); },
                     upto({{{1}, first}, {{2}, second}})});
    return reg;
}

const Registry& default_registry()
{
    static const Registry reg = builtin_registry(2);
    return reg;
}

// ---------------------------------------------------------------------------
// op files
// ---------------------------------------------------------------------------

namespace {

std::function<double(std::span<const double>)> library_function(const std::string& name, std::size_t arity)
{
    using F = double (*)(double);
    static const std::map<std::string, F> unary{
        {"exp", [](double x) { return std::exp(x); }},   {"log", [](double x) { return std::log(x); }},
        {"sin", [](double x) { return std::sin(x); }},   {"cos", [](double x) { return std::cos(x); }},
        {"tanh", [](double x) { return std::tanh(x); }}, {"sqrt", [](double x) { return std::sqrt(x); }},
    };
    if (name == "pi" && arity == 0) return [](std::span<const double>) { return std::numbers::pi; };
    if (auto it = unary.find(name); it != unary.end() && arity == 1) {
        F f = it->second;
        return [f](std::span<const double> a) { return f(a[0]); };
    }
    return nullptr;
}

// Evaluates a closed-over-arguments numeric term with the registry's
// numeric functions. Only ops, constants, argument variables, sums and
// products and let are allowed in a defining term.
double eval_definition(const Term& t, const Registry& reg, std::map<std::string, double>& env)
{
    if (const auto* v = t.as<node::Var>()) return env.at(v->name);
    if (const auto* c = t.as<node::Const>()) return c->value;
    if (const auto* o = t.as<node::OpApp>()) {
        std::vector<double> args;
        for (const auto& a : o->args) args.push_back(eval_definition(a, reg, env));
        return reg.at(o->op).numeric(args);
    }
    if (const auto* a = t.as<node::App>()) {
        if (const auto* l = a->fn.as<node::Lambda>()) {
            double value = eval_definition(a->arg, reg, env);
            auto saved = env;
            env[l->binder] = value;
            double r = eval_definition(l->body, reg, env);
            env = std::move(saved);
            return r;
        }
    }
    throw RegistryError("op definitions may only use ops, literals, arguments and let");
}

} // namespace

void load_op_file(std::string_view source, Registry& registry)
{
    Parser p(source, {&registry, false});
    while (!p.at_end()) {
        p.expect_keyword("op");
        const auto& name_tok = p.peek();
        if (name_tok.kind != Token::Kind::identifier) p.fail("expected op name");
        auto name = p.expect_identifier();
        p.expect_symbol("/");
        auto arity_text = p.expect_digits();
        const auto arity = static_cast<std::size_t>(std::stoul(arity_text));
        p.declare_op(name);

        OpSpec spec{name, arity, nullptr, {}};
        if (p.accept_symbol("=")) {
            Term def = p.term();
            Context args;
            for (std::size_t i = 0; i < arity; ++i) args.add(argument_name(i), Type::real());
            for (const auto& v : free_vars(def))
                if (!args.contains(v)) p.fail("definition of '" + name + "' has free variable '" + v + "'");
            const Registry* reg = &registry;
            spec.numeric = [def, reg, arity](std::span<const double> a) {
                std::map<std::string, double> env;
                for (std::size_t i = 0; i < arity; ++i) env[argument_name(i)] = a[i];
                return eval_definition(def, *reg, env);
            };
        } else {
            spec.numeric = library_function(name, arity);
            if (!spec.numeric) p.fail("'" + name + "/" + arity_text + "' has no built-in numeric function; give '= term'");
        }
        while (p.accept_keyword("deriv")) {
            auto digits = p.expect_digits();
            if (digits.size() != arity) p.fail("derivative index '" + digits + "' needs " + std::to_string(arity) + " digits");
            p.expect_symbol("=");
            auto beta = MultiIndex::from_digits(digits);
            if (!spec.derivatives.emplace(beta, p.term()).second) p.fail("derivative " + digits + " given twice");
        }
        registry.register_op(std::move(spec));
    }
}

} // namespace jetad
