#include <jetad/detail/overloaded.hpp>
#include <jetad/primops.hpp>
#include <jetad/typecheck.hpp>

#include <set>

namespace jetad {

Context::Context(std::initializer_list<std::pair<std::string, Type>> entries)
{
    for (const auto& [name, type] : entries) add(name, type);
}

void Context::add(std::string name, Type type)
{
    if (contains(name)) throw std::invalid_argument("context already binds '" + name + "'");
    entries_.emplace_back(std::move(name), std::move(type));
}

const Type* Context::find(std::string_view name) const
{
    for (const auto& [n, t] : entries_)
        if (n == name) return &t;
    return nullptr;
}

TypeError::TypeError(Kind kind, std::string message, std::vector<std::size_t> path, std::optional<Type> expected,
                     std::optional<Type> actual)
    : std::runtime_error(std::move(message)), kind_(kind), path_(std::move(path)), expected_(std::move(expected)),
      actual_(std::move(actual))
{}

std::string_view to_string(TypeError::Kind kind)
{
    switch (kind) {
    case TypeError::Kind::unbound_variable: return "unbound variable";
    case TypeError::Kind::arity_mismatch: return "arity mismatch";
    case TypeError::Kind::type_mismatch: return "type mismatch";
    case TypeError::Kind::non_function_application: return "application of a non-function";
    case TypeError::Kind::bad_constructor: return "bad constructor";
    case TypeError::Kind::branch_type_disagreement: return "case branches disagree";
    case TypeError::Kind::unknown_operation: return "unknown operation";
    case TypeError::Kind::cannot_infer: return "cannot infer type";
    }
    return "type error";
}

namespace {

using Kind = TypeError::Kind;

class Checker
{
public:
    Checker(const Context& ctx, const Registry& registry) : registry_(registry)
    {
        for (const auto& e : ctx.entries()) env_.push_back(e);
    }

    Type infer(const Term& t) { return go(t, nullptr); }
    void check(const Term& t, const Type& expected) { go(t, &expected); }

private:
    const Registry& registry_;
    std::vector<std::pair<std::string, Type>> env_;
    std::vector<std::size_t> path_;

    [[noreturn]] void fail(Kind kind, const std::string& what, std::optional<Type> expected = std::nullopt,
                           std::optional<Type> actual = std::nullopt) const
    {
        throw TypeError(kind, std::string(to_string(kind)) + ": " + what, path_, std::move(expected), std::move(actual));
    }

    const Type* lookup(const std::string& name) const
    {
        for (auto it = env_.rbegin(); it != env_.rend(); ++it)
            if (it->first == name) return &it->second;
        return nullptr;
    }

    // Runs f with `bindings` in scope and the path extended by `child`.
    template <typename F>
    auto scoped(std::size_t child, const std::vector<std::pair<std::string, Type>>& bindings, F&& f)
    {
        path_.push_back(child);
        const auto mark = env_.size();
        for (const auto& b : bindings) env_.push_back(b);
        struct Restore
        {
            Checker& c;
            std::size_t mark;
            ~Restore()
            {
                c.env_.resize(mark);
                c.path_.pop_back();
            }
        } restore{*this, mark};
        return f();
    }

    Type child(std::size_t i, const Term& t, const Type* expected = nullptr)
    {
        return scoped(i, {}, [&] { return go(t, expected); });
    }

    Type child_in(std::size_t i, const Term& t, const std::vector<std::pair<std::string, Type>>& b,
                  const Type* expected = nullptr)
    {
        return scoped(i, b, [&] { return go(t, expected); });
    }

    Type done(Type actual, const Type* expected)
    {
        if (expected && !(*expected == actual))
            fail(Kind::type_mismatch, "expected " + to_string(*expected) + ", got " + to_string(actual), *expected, actual);
        return actual;
    }

    Type go(const Term& t, const Type* expected)
    {
        return t.visit(detail::overloaded{
            [&](const node::Var& v) -> Type {
                const Type* ty = lookup(v.name);
                if (!ty) fail(Kind::unbound_variable, "'" + v.name + "'");
                return done(*ty, expected);
            },
            [&](const node::Const&) -> Type { return done(Type::real(), expected); },
            [&](const node::OpApp& o) -> Type {
                const OpSpec* spec = registry_.find(o.op);
                if (!spec) fail(Kind::unknown_operation, "'" + o.op + "'");
                if (spec->arity != o.args.size())
                    fail(Kind::arity_mismatch, "'" + o.op + "' takes " + std::to_string(spec->arity) +
                                                   " arguments, given " + std::to_string(o.args.size()));
                const Type real = Type::real();
                for (std::size_t i = 0; i < o.args.size(); ++i) child(i, o.args[i], &real);
                return done(real, expected);
            },
            [&](const node::Tuple& tu) -> Type {
                const bool guided = expected && expected->is_product() && expected->components().size() == tu.items.size();
                std::vector<Type> comps;
                for (std::size_t i = 0; i < tu.items.size(); ++i)
                    comps.push_back(child(i, tu.items[i], guided ? &expected->components()[i] : nullptr));
                return done(Type::product(std::move(comps)), expected);
            },
            [&](const node::TupleMatch& m) -> Type {
                Type s = child(0, m.scrutinee);
                if (!s.is_product())
                    fail(Kind::type_mismatch, "tuple pattern on a value of type " + to_string(s), std::nullopt, s);
                if (s.components().size() != m.binders.size())
                    fail(Kind::arity_mismatch, "pattern has " + std::to_string(m.binders.size()) + " binders, tuple has " +
                                                   std::to_string(s.components().size()) + " components",
                         std::nullopt, s);
                std::vector<std::pair<std::string, Type>> b;
                for (std::size_t i = 0; i < m.binders.size(); ++i) b.emplace_back(m.binders[i], s.components()[i]);
                return child_in(1, m.body, b, expected);
            },
            [&](const node::Lambda& l) -> Type {
                Type dom;
                if (l.annotation) {
                    dom = *l.annotation;
                    if (expected && expected->is_function() && !(expected->domain() == dom))
                        fail(Kind::type_mismatch, "lambda annotated " + to_string(dom) + ", expected domain " +
                                                      to_string(expected->domain()),
                             expected->domain(), dom);
                } else if (expected && expected->is_function()) {
                    dom = expected->domain();
                } else {
                    fail(Kind::cannot_infer, "lambda '" + l.binder + "' needs a type annotation");
                }
                const Type* cod = expected && expected->is_function() ? &expected->codomain() : nullptr;
                Type body = child_in(0, l.body, {{l.binder, dom}}, cod);
                return done(Type::function(dom, body), expected);
            },
            [&](const node::App& a) -> Type {
                if (const auto* l = a.fn.as<node::Lambda>(); l && !l->annotation) {
                    // let-binding: the argument fixes the binder's type.
                    Type arg = child(1, a.arg);
                    path_.push_back(0);
                    Type body = child_in(0, l->body, {{l->binder, arg}}, expected);
                    path_.pop_back();
                    return body;
                }
                Type fn = child(0, a.fn);
                if (!fn.is_function())
                    fail(Kind::non_function_application, "applying a value of type " + to_string(fn), std::nullopt, fn);
                child(1, a.arg, &fn.domain());
                return done(fn.codomain(), expected);
            },
            [&](const node::Inject& in) -> Type {
                auto idx = in.variant.constructor_index(in.ctor);
                if (!idx) fail(Kind::bad_constructor, "'" + in.ctor + "' is not a constructor of " + to_string(in.variant));
                child(0, in.payload, &in.variant.components()[*idx]);
                return done(in.variant, expected);
            },
            [&](const node::Case& c) -> Type { return case_of(c, expected); },
            [&](const node::Nil& n) -> Type {
                if (n.element) return done(Type::list(*n.element), expected);
                if (expected && expected->is_list()) return *expected;
                if (expected)
                    fail(Kind::type_mismatch, "nil where " + to_string(*expected) + " is expected", *expected);
                fail(Kind::cannot_infer, "nil needs an element type (nil : list T)");
            },
            [&](const node::Cons& c) -> Type {
                if (expected && expected->is_list()) {
                    child(0, c.head, &expected->element());
                    child(1, c.tail, expected);
                    return *expected;
                }
                Type head = child(0, c.head);
                Type list = Type::list(head);
                child(1, c.tail, &list);
                return done(list, expected);
            },
            [&](const node::Fold& f) -> Type {
                Type list = child(1, f.list);
                if (!list.is_list()) fail(Kind::type_mismatch, "fold over a value of type " + to_string(list), std::nullopt, list);
                Type acc = child(2, f.init, expected);
                child_in(0, f.step, {{f.elem, list.element()}, {f.acc, acc}}, &acc);
                return acc;
            },
        });
    }

    Type case_of(const node::Case& c, const Type* expected)
    {
        Type s = child(0, c.scrutinee);
        if (!s.is_variant()) fail(Kind::type_mismatch, "case on a value of type " + to_string(s), std::nullopt, s);
        std::set<std::string> seen;
        for (std::size_t i = 0; i < c.branches.size(); ++i) {
            const auto& b = c.branches[i];
            path_.push_back(i + 1);
            if (!s.constructor_index(b.ctor)) fail(Kind::bad_constructor, "'" + b.ctor + "' is not a constructor of " + to_string(s));
            if (!seen.insert(b.ctor).second) fail(Kind::bad_constructor, "constructor '" + b.ctor + "' matched twice");
            path_.pop_back();
        }
        for (const auto& name : s.constructor_names())
            if (!seen.contains(name)) fail(Kind::bad_constructor, "constructor '" + name + "' not matched");

        auto branch = [&](std::size_t i, const Type* exp) {
            const auto& b = c.branches[i];
            return child_in(i + 1, b.body, {{b.binder, s.components()[*s.constructor_index(b.ctor)]}}, exp);
        };
        if (expected) {
            for (std::size_t i = 0; i < c.branches.size(); ++i) branch(i, expected);
            return *expected;
        }
        std::optional<Type> result;
        std::vector<std::size_t> deferred;
        for (std::size_t i = 0; i < c.branches.size(); ++i) {
            try {
                Type t = branch(i, nullptr);
                if (result && !(*result == t)) {
                    path_.push_back(i + 1);
                    fail(Kind::branch_type_disagreement,
                         "branch '" + c.branches[i].ctor + "' has type " + to_string(t) + ", earlier branches " +
                             to_string(*result),
                         *result, t);
                }
                result = t;
            } catch (const TypeError& e) {
                if (e.kind() != Kind::cannot_infer) throw;
                deferred.push_back(i);
            }
        }
        if (!result) fail(Kind::cannot_infer, "no case branch has an inferable type");
        for (auto i : deferred) branch(i, &*result);
        return *result;
    }
};

} // namespace

Type infer(const Context& ctx, const Term& term, const Registry* registry)
{
    return Checker(ctx, registry ? *registry : default_registry()).infer(term);
}

void check(const Context& ctx, const Term& term, const Type& expected, const Registry* registry)
{
    Checker(ctx, registry ? *registry : default_registry()).check(term, expected);
}

std::optional<Type> try_infer(const Context& ctx, const Term& term, const Registry* registry)
{
    try {
        return infer(ctx, term, registry);
    } catch (const TypeError&) {
        return std::nullopt;
    }
}

Term subterm_at(const Term& term, const std::vector<std::size_t>& path)
{
    Term t = term;
    for (std::size_t i : path) {
        t = t.visit(detail::overloaded{
            [&](const node::OpApp& o) { return o.args.at(i); },
            [&](const node::Tuple& tu) { return tu.items.at(i); },
            [&](const node::TupleMatch& m) { return i == 0 ? m.scrutinee : m.body; },
            [&](const node::Lambda& l) { return l.body; },
            [&](const node::App& a) { return i == 0 ? a.fn : a.arg; },
            [&](const node::Inject& in) { return in.payload; },
            [&](const node::Case& c) { return i == 0 ? c.scrutinee : c.branches.at(i - 1).body; },
            [&](const node::Cons& c) { return i == 0 ? c.head : c.tail; },
            [&](const node::Fold& f) { return i == 0 ? f.step : i == 1 ? f.list : f.init; },
            [&](const auto&) -> Term { throw std::out_of_range("path leads into a leaf"); },
        });
    }
    return t;
}

} // namespace jetad
