#include <jetad/detail/overloaded.hpp>
#include <jetad/eval.hpp>
#include <jetad/primops.hpp>
#include <jetad/printer.hpp>
#include <jetad/syntax.hpp>

#include <bit>
#include <cstdint>
#include <set>

namespace jetad {

// ---------------------------------------------------------------------------
// values and environments
// ---------------------------------------------------------------------------

struct Env::Node
{
    std::string name;
    Value value;
    std::shared_ptr<const Node> parent;
};

Env Env::bind(std::string name, Value value) const
{
    return Env(std::make_shared<const Node>(Node{std::move(name), std::move(value), head_}));
}

const Value* Env::find(std::string_view name) const
{
    for (const Node* n = head_.get(); n; n = n->parent.get())
        if (n->name == name) return &n->value;
    return nullptr;
}

Value Value::real(double v)
{
    auto n = std::make_shared<ValueNode>();
    n->kind = Kind::real;
    n->real = v;
    return Value(std::move(n));
}

Value Value::tuple(std::vector<Value> items)
{
    auto n = std::make_shared<ValueNode>();
    n->kind = Kind::tuple;
    n->items = std::move(items);
    return Value(std::move(n));
}

Value Value::closure(std::string binder, Term body, Env env)
{
    auto n = std::make_shared<ValueNode>();
    n->kind = Kind::closure;
    n->name = std::move(binder);
    n->body = std::move(body);
    n->env = std::move(env);
    return Value(std::move(n));
}

Value Value::variant(std::string ctor, Value payload)
{
    auto n = std::make_shared<ValueNode>();
    n->kind = Kind::variant;
    n->name = std::move(ctor);
    n->items.push_back(std::move(payload));
    return Value(std::move(n));
}

Value Value::list(std::vector<Value> items)
{
    auto n = std::make_shared<ValueNode>();
    n->kind = Kind::list;
    n->items = std::move(items);
    return Value(std::move(n));
}

Value::Kind Value::kind() const noexcept { return node_->kind; }

namespace {

const char* kind_name(Value::Kind k)
{
    switch (k) {
    case Value::Kind::real: return "real";
    case Value::Kind::tuple: return "tuple";
    case Value::Kind::closure: return "closure";
    case Value::Kind::variant: return "variant";
    case Value::Kind::list: return "list";
    }
    return "?";
}

void expect_kind(const ValueNode& n, Value::Kind k)
{
    if (n.kind != k) throw EvalError(std::string("expected a ") + kind_name(k) + " value, got a " + kind_name(n.kind));
}

} // namespace

double Value::as_real() const
{
    expect_kind(*node_, Kind::real);
    return node_->real;
}

const std::vector<Value>& Value::items() const
{
    if (node_->kind != Kind::tuple && node_->kind != Kind::list)
        throw EvalError(std::string("expected a tuple or list value, got a ") + kind_name(node_->kind));
    return node_->items;
}

const std::string& Value::ctor() const
{
    expect_kind(*node_, Kind::variant);
    return node_->name;
}

const Value& Value::payload() const
{
    expect_kind(*node_, Kind::variant);
    return node_->items.front();
}

const std::string& Value::binder() const
{
    expect_kind(*node_, Kind::closure);
    return node_->name;
}

const Term& Value::body() const
{
    expect_kind(*node_, Kind::closure);
    return *node_->body;
}

const Env& Value::env() const
{
    expect_kind(*node_, Kind::closure);
    return node_->env;
}

// ---------------------------------------------------------------------------
// evaluation
// ---------------------------------------------------------------------------

namespace {

class Evaluator
{
public:
    explicit Evaluator(const Registry& reg) : reg_(reg) {}

    Value go(const Env& env, const Term& t)
    {
        return t.visit(detail::overloaded{
            [&](const node::Var& v) {
                const Value* x = env.find(v.name);
                if (!x) throw EvalError("unbound variable '" + v.name + "'");
                return *x;
            },
            [&](const node::Const& c) { return Value::real(c.value); },
            [&](const node::OpApp& o) {
                const OpSpec* spec = reg_.find(o.op);
                if (!spec) throw EvalError("unknown operation '" + o.op + "'");
                std::vector<double> args;
                args.reserve(o.args.size());
                for (const auto& a : o.args) args.push_back(go(env, a).as_real());
                return Value::real(spec->numeric(args));
            },
            [&](const node::Tuple& tu) {
                std::vector<Value> items;
                items.reserve(tu.items.size());
                for (const auto& i : tu.items) items.push_back(go(env, i));
                return Value::tuple(std::move(items));
            },
            [&](const node::TupleMatch& m) {
                Value s = go(env, m.scrutinee);
                const auto& items = s.items();
                if (s.kind() != Value::Kind::tuple || items.size() != m.binders.size())
                    throw EvalError("tuple pattern does not fit the value");
                Env inner = env;
                for (std::size_t i = 0; i < items.size(); ++i) inner = inner.bind(m.binders[i], items[i]);
                return go(inner, m.body);
            },
            [&](const node::Lambda& l) { return Value::closure(l.binder, l.body, env); },
            [&](const node::App& a) {
                Value fn = go(env, a.fn);
                Value arg = go(env, a.arg);
                return apply(fn, arg);
            },
            [&](const node::Inject& i) { return Value::variant(i.ctor, go(env, i.payload)); },
            [&](const node::Case& c) {
                Value s = go(env, c.scrutinee);
                for (const auto& b : c.branches)
                    if (b.ctor == s.ctor()) return go(env.bind(b.binder, s.payload()), b.body);
                throw EvalError("no case branch for constructor '" + s.ctor() + "'");
            },
            [&](const node::Nil&) { return Value::list({}); },
            [&](const node::Cons& c) {
                Value head = go(env, c.head);
                Value tail = go(env, c.tail);
                if (tail.kind() != Value::Kind::list) throw EvalError("cons onto a non-list");
                std::vector<Value> items;
                items.reserve(tail.items().size() + 1);
                items.push_back(std::move(head));
                items.insert(items.end(), tail.items().begin(), tail.items().end());
                return Value::list(std::move(items));
            },
            [&](const node::Fold& f) {
                // fold over nil = init; fold over cons(a, l) = step[a, fold over l].
                Value list = go(env, f.list);
                if (list.kind() != Value::Kind::list) throw EvalError("fold over a non-list");
                Value acc = go(env, f.init);
                const auto& items = list.items();
                for (auto it = items.rbegin(); it != items.rend(); ++it)
                    acc = go(env.bind(f.elem, *it).bind(f.acc, acc), f.step);
                return acc;
            },
        });
    }

    Value apply(const Value& fn, const Value& arg)
    {
        if (fn.kind() != Value::Kind::closure) throw EvalError("applying a non-function value");
        return go(fn.env().bind(fn.binder(), arg), fn.body());
    }

private:
    const Registry& reg_;
};

const Registry& pick(const Registry* r) { return r ? *r : default_registry(); }

} // namespace

Value eval(const Env& env, const Term& term, const Registry* registry)
{
    return Evaluator(pick(registry)).go(env, term);
}

Value apply(const Value& fn, const Value& arg, const Registry* registry)
{
    return Evaluator(pick(registry)).apply(fn, arg);
}

bool bit_identical(const Value& a, const Value& b)
{
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
    case Value::Kind::real:
        return std::bit_cast<std::uint64_t>(a.as_real()) == std::bit_cast<std::uint64_t>(b.as_real());
    case Value::Kind::tuple:
    case Value::Kind::list: {
        if (a.items().size() != b.items().size()) return false;
        for (std::size_t i = 0; i < a.items().size(); ++i)
            if (!bit_identical(a.items()[i], b.items()[i])) return false;
        return true;
    }
    case Value::Kind::variant:
        return a.ctor() == b.ctor() && bit_identical(a.payload(), b.payload());
    case Value::Kind::closure:
        return false;
    }
    return false;
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

nlohmann::json to_json(const Value& value)
{
    switch (value.kind()) {
    case Value::Kind::real:
        return value.as_real();
    case Value::Kind::tuple: {
        auto arr = nlohmann::json::array();
        for (const auto& i : value.items()) arr.push_back(to_json(i));
        return arr;
    }
    case Value::Kind::list: {
        auto arr = nlohmann::json::array();
        for (const auto& i : value.items()) arr.push_back(to_json(i));
        return {{"list", arr}};
    }
    case Value::Kind::variant:
        return {{"ctor", value.ctor()}, {"value", to_json(value.payload())}};
    case Value::Kind::closure:
        return {{"closure", pretty(surface_names(mk::lambda(value.binder(), std::nullopt, value.body())))}};
    }
    return nullptr;
}

Value value_from_json(const nlohmann::json& j, const Type& type)
{
    switch (type.kind()) {
    case Type::Kind::real:
        if (!j.is_number()) throw EvalError("expected a number for type real, got " + j.dump());
        return Value::real(j.get<double>());
    case Type::Kind::product: {
        if (!j.is_array() || j.size() != type.components().size())
            throw EvalError("expected an array of " + std::to_string(type.components().size()) + " items for " +
                            to_string(type) + ", got " + j.dump());
        std::vector<Value> items;
        for (std::size_t i = 0; i < j.size(); ++i) items.push_back(value_from_json(j[i], type.components()[i]));
        return Value::tuple(std::move(items));
    }
    case Type::Kind::list: {
        const nlohmann::json& arr = j.is_object() && j.contains("list") ? j.at("list") : j;
        if (!arr.is_array()) throw EvalError("expected an array for " + to_string(type) + ", got " + j.dump());
        std::vector<Value> items;
        for (const auto& e : arr) items.push_back(value_from_json(e, type.element()));
        return Value::list(std::move(items));
    }
    case Type::Kind::variant: {
        if (!j.is_object() || !j.contains("ctor") || !j.contains("value"))
            throw EvalError("expected {\"ctor\": ..., \"value\": ...} for " + to_string(type) + ", got " + j.dump());
        auto ctor = j.at("ctor").get<std::string>();
        auto idx = type.constructor_index(ctor);
        if (!idx) throw EvalError("'" + ctor + "' is not a constructor of " + to_string(type));
        return Value::variant(ctor, value_from_json(j.at("value"), type.components()[*idx]));
    }
    case Type::Kind::function:
        throw EvalError("function values cannot be read from JSON");
    }
    throw EvalError("unsupported type");
}

Env env_from_json(const nlohmann::json& j, const Context& ctx)
{
    if (!j.is_object()) throw EvalError("inputs must be a JSON object");
    Env env;
    for (const auto& [name, type] : ctx.entries()) {
        if (!j.contains(name)) throw EvalError("no input for '" + name + "'");
        env = env.bind(name, value_from_json(j.at(name), type));
    }
    for (const auto& [key, v] : j.items())
        if (!ctx.contains(key)) throw EvalError("input '" + key + "' is not a free variable of the program");
    return env;
}

// ---------------------------------------------------------------------------
// first-order programs and jets
// ---------------------------------------------------------------------------

namespace {

bool real_tree(const Type& t)
{
    if (t.is_real()) return true;
    if (!t.is_product()) return false;
    for (const auto& c : t.components())
        if (!real_tree(c)) return false;
    return true;
}

class Flattener
{
public:
    explicit Flattener(std::set<std::string> taken) : taken_(std::move(taken)) {}

    Context ctx;

    // A term of type `t` made of fresh real variables named after `stem`.
    Term leaves(const Type& t, const std::string& stem)
    {
        if (t.is_real()) {
            auto name = unique(stem);
            ctx.add(name, Type::real());
            return mk::var(name);
        }
        std::vector<Term> items;
        for (std::size_t i = 0; i < t.components().size(); ++i)
            items.push_back(leaves(t.components()[i], stem + "_" + std::to_string(i + 1)));
        return mk::tuple(std::move(items));
    }

private:
    std::set<std::string> taken_;

    std::string unique(const std::string& stem)
    {
        std::string name = stem;
        for (int n = 2; taken_.contains(name); ++n) name = stem + "_" + std::to_string(n);
        taken_.insert(name);
        return name;
    }
};

} // namespace

FirstOrderProgram first_order_view(const Term& program, const Context& ctx, const Registry* registry)
{
    Type type = infer(ctx, program, registry);
    std::set<std::string> taken;
    for (const auto& [n, t] : ctx.entries()) taken.insert(n);

    Flattener flat(taken);
    std::vector<std::pair<std::string, Term>> bindings;
    for (const auto& [name, t] : ctx.entries()) {
        if (!real_tree(t)) throw EvalError("context variable '" + name + "' has non-first-order type " + to_string(t));
        if (t.is_real()) {
            flat.ctx.add(name, t);
        } else {
            bindings.emplace_back(name, flat.leaves(t, name));
        }
    }
    Term body = program;
    std::size_t arg = 0;
    while (type.is_function()) {
        if (!real_tree(type.domain()))
            throw EvalError("program argument of type " + to_string(type.domain()) + " is not first-order");
        body = mk::app(body, flat.leaves(type.domain(), "arg" + std::to_string(++arg)));
        type = type.codomain();
    }
    if (!type.is_real()) throw EvalError("program result type " + to_string(type) + " is not real");
    for (auto it = bindings.rbegin(); it != bindings.rend(); ++it) body = mk::let(it->first, it->second, body);
    return {flat.ctx, body};
}

double eval_at(const FirstOrderProgram& program, std::span<const double> point, const Registry* registry)
{
    if (point.size() != program.ctx.size())
        throw EvalError("point has " + std::to_string(point.size()) + " coordinates, program takes " +
                        std::to_string(program.ctx.size()));
    Env env;
    for (std::size_t i = 0; i < point.size(); ++i) env = env.bind(program.ctx.entries()[i].first, Value::real(point[i]));
    return eval(env, program.body, registry).as_real();
}

Value jet_value(const JetVector& jet)
{
    std::vector<Value> items;
    for (double c : jet.coeffs()) items.push_back(Value::real(c));
    return Value::tuple(std::move(items));
}

JetVector jet_from_value(const Value& value, const JetShape& shape)
{
    if (value.kind() != Value::Kind::tuple || value.items().size() != shape.size())
        throw EvalError("result is not a jet of " + std::to_string(shape.size()) + " coefficients");
    std::vector<double> coeffs;
    for (const auto& v : value.items()) coeffs.push_back(v.as_real());
    return JetVector(shape, std::move(coeffs));
}

JetVector eval_transformed(const MacroConfig& cfg, const Term& transformed, const Context& ctx,
                           std::span<const JetVector> seeds)
{
    const auto shape = cfg.shape();
    if (seeds.size() != ctx.size())
        throw EvalError("need " + std::to_string(ctx.size()) + " seed jets, got " + std::to_string(seeds.size()));
    Env env;
    for (std::size_t i = 0; i < seeds.size(); ++i) {
        const auto& [name, type] = ctx.entries()[i];
        if (!type.is_real()) throw EvalError("jet programs take real variables only; '" + name + "' is " + to_string(type));
        if (!(seeds[i].shape() == shape)) throw EvalError("seed jet for '" + name + "' has the wrong shape");
        env = env.bind(name, jet_value(seeds[i]));
    }
    return jet_from_value(eval(env, transformed, cfg.registry), shape);
}

JetVector eval_jet_program(const MacroConfig& cfg, const Term& program, const Context& ctx,
                           std::span<const JetVector> seeds)
{
    return eval_transformed(cfg, d_term(cfg, program), ctx, seeds);
}

} // namespace jetad
