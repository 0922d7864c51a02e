#include <jetad/syntax.hpp>

#include <jetad/detail/overloaded.hpp>

#include <atomic>
#include <bit>
#include <cstdint>
#include <unordered_map>
#include <utility>

namespace jetad {

namespace {

using detail::overloaded;

// ---------------------------------------------------------------------------
// free variables
// ---------------------------------------------------------------------------

class FreeVarCollector
{
public:
    std::vector<std::string> ordered;
    std::set<std::string> seen;

    void walk(const Term& t)
    {
        t.visit(overloaded{
            [&](const node::Var& v) {
                if (!is_bound(v.name) && seen.insert(v.name).second) ordered.push_back(v.name);
            },
            [&](const node::Const&) {},
            [&](const node::OpApp& o) {
                for (const auto& a : o.args) walk(a);
            },
            [&](const node::Tuple& tu) {
                for (const auto& a : tu.items) walk(a);
            },
            [&](const node::TupleMatch& m) {
                walk(m.scrutinee);
                scoped(m.binders, m.body);
            },
            [&](const node::Lambda& l) { scoped({l.binder}, l.body); },
            [&](const node::App& a) {
                // `let x = v in b` lists v before b in the source text.
                if (a.fn.is<node::Lambda>()) {
                    walk(a.arg);
                    walk(a.fn);
                } else {
                    walk(a.fn);
                    walk(a.arg);
                }
            },
            [&](const node::Inject& i) { walk(i.payload); },
            [&](const node::Case& c) {
                walk(c.scrutinee);
                for (const auto& b : c.branches) scoped({b.binder}, b.body);
            },
            [&](const node::Nil&) {},
            [&](const node::Cons& c) {
                walk(c.head);
                walk(c.tail);
            },
            [&](const node::Fold& f) {
                scoped({f.elem, f.acc}, f.step);
                walk(f.list);
                walk(f.init);
            },
        });
    }

private:
    std::unordered_map<std::string, int> bound_;

    bool is_bound(const std::string& name) const
    {
        auto it = bound_.find(name);
        return it != bound_.end() && it->second > 0;
    }

    void scoped(const std::vector<std::string>& binders, const Term& body)
    {
        for (const auto& b : binders) ++bound_[b];
        walk(body);
        for (const auto& b : binders) --bound_[b];
    }
};

std::size_t count_free_impl(const Term& t, std::string_view name)
{
    auto under = [&](std::initializer_list<std::string_view> binders, const Term& body) -> std::size_t {
        for (auto b : binders)
            if (b == name) return 0;
        return count_free_impl(body, name);
    };
    return t.visit(overloaded{
        [&](const node::Var& v) -> std::size_t { return v.name == name ? 1 : 0; },
        [&](const node::Const&) -> std::size_t { return 0; },
        [&](const node::OpApp& o) {
            std::size_t n = 0;
            for (const auto& a : o.args) n += count_free_impl(a, name);
            return n;
        },
        [&](const node::Tuple& tu) {
            std::size_t n = 0;
            for (const auto& a : tu.items) n += count_free_impl(a, name);
            return n;
        },
        [&](const node::TupleMatch& m) {
            std::size_t n = count_free_impl(m.scrutinee, name);
            for (const auto& b : m.binders)
                if (b == name) return n;
            return n + count_free_impl(m.body, name);
        },
        [&](const node::Lambda& l) { return under({l.binder}, l.body); },
        [&](const node::App& a) { return count_free_impl(a.fn, name) + count_free_impl(a.arg, name); },
        [&](const node::Inject& i) { return count_free_impl(i.payload, name); },
        [&](const node::Case& c) {
            std::size_t n = count_free_impl(c.scrutinee, name);
            for (const auto& b : c.branches) n += under({b.binder}, b.body);
            return n;
        },
        [&](const node::Nil&) -> std::size_t { return 0; },
        [&](const node::Cons& c) { return count_free_impl(c.head, name) + count_free_impl(c.tail, name); },
        [&](const node::Fold& f) {
            return under({f.elem, f.acc}, f.step) + count_free_impl(f.list, name) + count_free_impl(f.init, name);
        },
    });
}

// ---------------------------------------------------------------------------
// substitution
// ---------------------------------------------------------------------------

using Subst = std::map<std::string, Term>;

class Substituter
{
public:
    explicit Substituter(const Subst& s)
    {
        for (const auto& [name, repl] : s) {
            auto fv = free_vars(repl);
            danger_.insert(fv.begin(), fv.end());
        }
    }

    Term go(const Term& t, const Subst& s)
    {
        if (s.empty()) return t;
        return t.visit(overloaded{
            [&](const node::Var& v) -> Term {
                auto it = s.find(v.name);
                return it == s.end() ? t : it->second;
            },
            [&](const node::Const&) -> Term { return t; },
            [&](const node::OpApp& o) -> Term { return mk::op(o.op, map_all(o.args, s)); },
            [&](const node::Tuple& tu) -> Term { return mk::tuple(map_all(tu.items, s)); },
            [&](const node::TupleMatch& m) -> Term {
                Subst inner = s;
                auto binders = enter(m.binders, inner);
                return mk::match(go(m.scrutinee, s), std::move(binders), go(m.body, inner));
            },
            [&](const node::Lambda& l) -> Term {
                Subst inner = s;
                auto binders = enter({l.binder}, inner);
                return mk::lambda(binders[0], l.annotation, go(l.body, inner));
            },
            [&](const node::App& a) -> Term { return mk::app(go(a.fn, s), go(a.arg, s)); },
            [&](const node::Inject& i) -> Term { return mk::inject(i.variant, i.ctor, go(i.payload, s)); },
            [&](const node::Case& c) -> Term {
                std::vector<node::CaseBranch> branches;
                for (const auto& b : c.branches) {
                    Subst inner = s;
                    auto binders = enter({b.binder}, inner);
                    branches.push_back({b.ctor, binders[0], go(b.body, inner)});
                }
                return mk::case_of(go(c.scrutinee, s), std::move(branches));
            },
            [&](const node::Nil&) -> Term { return t; },
            [&](const node::Cons& c) -> Term { return mk::cons(go(c.head, s), go(c.tail, s)); },
            [&](const node::Fold& f) -> Term {
                Subst inner = s;
                auto binders = enter({f.elem, f.acc}, inner);
                return mk::fold(binders[0], binders[1], go(f.step, inner), go(f.list, s), go(f.init, s));
            },
        });
    }

private:
    std::set<std::string> danger_;

    std::vector<Term> map_all(const std::vector<Term>& ts, const Subst& s)
    {
        std::vector<Term> out;
        out.reserve(ts.size());
        for (const auto& x : ts) out.push_back(go(x, s));
        return out;
    }

    // Removes shadowed entries and renames binders that would capture a free
    // variable of some replacement.
    std::vector<std::string> enter(const std::vector<std::string>& binders, Subst& s)
    {
        for (const auto& b : binders) s.erase(b);
        std::vector<std::string> out;
        out.reserve(binders.size());
        for (const auto& b : binders) {
            if (!s.empty() && danger_.count(b)) {
                auto renamed = fresh_name(b);
                s.insert_or_assign(b, mk::var(renamed));
                out.push_back(std::move(renamed));
            } else {
                out.push_back(b);
            }
        }
        return out;
    }
};

// ---------------------------------------------------------------------------
// alpha equivalence
// ---------------------------------------------------------------------------

class AlphaEq
{
public:
    bool eq(const Term& a, const Term& b)
    {
        if (a.node().data.index() != b.node().data.index()) return false;
        return a.visit(overloaded{
            [&](const node::Var& x) { return same_var(x.name, b.as<node::Var>()->name); },
            [&](const node::Const& x) {
                return std::bit_cast<std::uint64_t>(x.value) == std::bit_cast<std::uint64_t>(b.as<node::Const>()->value);
            },
            [&](const node::OpApp& x) {
                const auto& y = *b.as<node::OpApp>();
                return x.op == y.op && all_eq(x.args, y.args);
            },
            [&](const node::Tuple& x) { return all_eq(x.items, b.as<node::Tuple>()->items); },
            [&](const node::TupleMatch& x) {
                const auto& y = *b.as<node::TupleMatch>();
                return x.binders.size() == y.binders.size() && eq(x.scrutinee, y.scrutinee) &&
                       under(x.binders, y.binders, x.body, y.body);
            },
            [&](const node::Lambda& x) {
                const auto& y = *b.as<node::Lambda>();
                return x.annotation == y.annotation && under({x.binder}, {y.binder}, x.body, y.body);
            },
            [&](const node::App& x) {
                const auto& y = *b.as<node::App>();
                return eq(x.fn, y.fn) && eq(x.arg, y.arg);
            },
            [&](const node::Inject& x) {
                const auto& y = *b.as<node::Inject>();
                return x.variant == y.variant && x.ctor == y.ctor && eq(x.payload, y.payload);
            },
            [&](const node::Case& x) {
                const auto& y = *b.as<node::Case>();
                if (x.branches.size() != y.branches.size() || !eq(x.scrutinee, y.scrutinee)) return false;
                for (std::size_t i = 0; i < x.branches.size(); ++i) {
                    const auto& bx = x.branches[i];
                    const auto& by = y.branches[i];
                    if (bx.ctor != by.ctor || !under({bx.binder}, {by.binder}, bx.body, by.body)) return false;
                }
                return true;
            },
            [&](const node::Nil& x) { return x.element == b.as<node::Nil>()->element; },
            [&](const node::Cons& x) {
                const auto& y = *b.as<node::Cons>();
                return eq(x.head, y.head) && eq(x.tail, y.tail);
            },
            [&](const node::Fold& x) {
                const auto& y = *b.as<node::Fold>();
                return eq(x.list, y.list) && eq(x.init, y.init) &&
                       under({x.elem, x.acc}, {y.elem, y.acc}, x.step, y.step);
            },
        });
    }

private:
    std::vector<std::pair<std::string, std::string>> scope_;

    bool all_eq(const std::vector<Term>& xs, const std::vector<Term>& ys)
    {
        if (xs.size() != ys.size()) return false;
        for (std::size_t i = 0; i < xs.size(); ++i)
            if (!eq(xs[i], ys[i])) return false;
        return true;
    }

    bool under(const std::vector<std::string>& bx, const std::vector<std::string>& by, const Term& x, const Term& y)
    {
        for (std::size_t i = 0; i < bx.size(); ++i) scope_.emplace_back(bx[i], by[i]);
        bool result = eq(x, y);
        scope_.resize(scope_.size() - bx.size());
        return result;
    }

    bool same_var(const std::string& a, const std::string& b) const
    {
        std::ptrdiff_t ia = -1;
        std::ptrdiff_t ib = -1;
        for (auto i = static_cast<std::ptrdiff_t>(scope_.size()) - 1; i >= 0 && (ia < 0 || ib < 0); --i) {
            if (ia < 0 && scope_[static_cast<std::size_t>(i)].first == a) ia = i;
            if (ib < 0 && scope_[static_cast<std::size_t>(i)].second == b) ib = i;
        }
        if (ia < 0 && ib < 0) return a == b;
        return ia == ib;
    }
};

// ---------------------------------------------------------------------------
// surface names
// ---------------------------------------------------------------------------

void collect_names(const Term& t, std::set<std::string>& out)
{
    t.visit(overloaded{
        [&](const node::Var& v) { out.insert(v.name); },
        [&](const node::Const&) {},
        [&](const node::OpApp& o) {
            for (const auto& a : o.args) collect_names(a, out);
        },
        [&](const node::Tuple& tu) {
            for (const auto& a : tu.items) collect_names(a, out);
        },
        [&](const node::TupleMatch& m) {
            out.insert(m.binders.begin(), m.binders.end());
            collect_names(m.scrutinee, out);
            collect_names(m.body, out);
        },
        [&](const node::Lambda& l) {
            out.insert(l.binder);
            collect_names(l.body, out);
        },
        [&](const node::App& a) {
            collect_names(a.fn, out);
            collect_names(a.arg, out);
        },
        [&](const node::Inject& i) { collect_names(i.payload, out); },
        [&](const node::Case& c) {
            collect_names(c.scrutinee, out);
            for (const auto& b : c.branches) {
                out.insert(b.binder);
                collect_names(b.body, out);
            }
        },
        [&](const node::Nil&) {},
        [&](const node::Cons& c) {
            collect_names(c.head, out);
            collect_names(c.tail, out);
        },
        [&](const node::Fold& f) {
            out.insert(f.elem);
            out.insert(f.acc);
            collect_names(f.step, out);
            collect_names(f.list, out);
            collect_names(f.init, out);
        },
    });
}

class SurfaceRenamer
{
public:
    explicit SurfaceRenamer(std::set<std::string> used) : used_(std::move(used)) {}

    Term go(const Term& t)
    {
        return t.visit(overloaded{
            [&](const node::Var& v) -> Term {
                if (!is_reserved(v.name)) return t;
                for (auto it = scope_.rbegin(); it != scope_.rend(); ++it)
                    if (it->first == v.name) return mk::var(it->second);
                auto [it, inserted] = free_renames_.try_emplace(v.name);
                if (inserted) it->second = invent(v.name);
                return mk::var(it->second);
            },
            [&](const node::Const&) -> Term { return t; },
            [&](const node::OpApp& o) -> Term { return mk::op(o.op, map_all(o.args)); },
            [&](const node::Tuple& tu) -> Term { return mk::tuple(map_all(tu.items)); },
            [&](const node::TupleMatch& m) -> Term {
                auto scrutinee = go(m.scrutinee);
                auto binders = push(m.binders);
                auto body = go(m.body);
                pop(m.binders.size());
                return mk::match(scrutinee, std::move(binders), body);
            },
            [&](const node::Lambda& l) -> Term {
                auto binders = push({l.binder});
                auto body = go(l.body);
                pop(1);
                return mk::lambda(binders[0], l.annotation, body);
            },
            [&](const node::App& a) -> Term { return mk::app(go(a.fn), go(a.arg)); },
            [&](const node::Inject& i) -> Term { return mk::inject(i.variant, i.ctor, go(i.payload)); },
            [&](const node::Case& c) -> Term {
                auto scrutinee = go(c.scrutinee);
                std::vector<node::CaseBranch> branches;
                for (const auto& b : c.branches) {
                    auto binders = push({b.binder});
                    branches.push_back({b.ctor, binders[0], go(b.body)});
                    pop(1);
                }
                return mk::case_of(scrutinee, std::move(branches));
            },
            [&](const node::Nil&) -> Term { return t; },
            [&](const node::Cons& c) -> Term { return mk::cons(go(c.head), go(c.tail)); },
            [&](const node::Fold& f) -> Term {
                auto binders = push({f.elem, f.acc});
                auto step = go(f.step);
                pop(2);
                return mk::fold(binders[0], binders[1], step, go(f.list), go(f.init));
            },
        });
    }

private:
    std::set<std::string> used_;
    std::vector<std::pair<std::string, std::string>> scope_;
    std::map<std::string, std::string> free_renames_;

    std::vector<Term> map_all(const std::vector<Term>& ts)
    {
        std::vector<Term> out;
        out.reserve(ts.size());
        for (const auto& x : ts) out.push_back(go(x));
        return out;
    }

    std::vector<std::string> push(const std::vector<std::string>& binders)
    {
        std::vector<std::string> out;
        for (const auto& b : binders) {
            std::string name = is_reserved(b) ? invent(b) : b;
            scope_.emplace_back(b, name);
            out.push_back(std::move(name));
        }
        return out;
    }

    void pop(std::size_t n) { scope_.resize(scope_.size() - n); }

    std::string invent(const std::string& reserved)
    {
        std::string base = reserved;
        if (auto pos = base.rfind('%'); pos != std::string::npos && pos + 1 < base.size()) {
            bool counter = true;
            for (std::size_t i = pos + 1; i < base.size(); ++i)
                if (base[i] < '0' || base[i] > '9') counter = false;
            if (counter) base.resize(pos);
        }
        std::erase(base, '%');
        if (base.empty()) base = "v";
        std::string candidate = base;
        for (unsigned n = 2; used_.count(candidate); ++n) candidate = base + "_" + std::to_string(n);
        used_.insert(candidate);
        return candidate;
    }
};

} // namespace

std::set<std::string> free_vars(const Term& term)
{
    FreeVarCollector c;
    c.walk(term);
    return std::move(c.seen);
}

std::vector<std::string> free_vars_ordered(const Term& term)
{
    FreeVarCollector c;
    c.walk(term);
    return std::move(c.ordered);
}

std::size_t count_free(const Term& term, std::string_view name) { return count_free_impl(term, name); }

bool is_reserved(std::string_view name) noexcept { return name.find('%') != std::string_view::npos; }

std::string fresh_name(std::string_view base)
{
    static std::atomic<std::uint64_t> counter{0};
    std::string stem{base};
    if (auto pos = stem.rfind('%'); pos != std::string::npos) {
        bool numeric = pos + 1 < stem.size();
        for (std::size_t i = pos + 1; i < stem.size(); ++i)
            if (stem[i] < '0' || stem[i] > '9') numeric = false;
        if (numeric) stem.resize(pos);
    }
    return stem + "%" + std::to_string(++counter);
}

Term substitute(const Term& body, const std::string& var, const Term& replacement)
{
    return substitute_many(body, {{var, replacement}});
}

Term substitute_many(const Term& body, const std::map<std::string, Term>& replacements)
{
    Substituter s{replacements};
    return s.go(body, replacements);
}

bool alpha_eq(const Term& a, const Term& b)
{
    AlphaEq eq;
    return eq.eq(a, b);
}

Term surface_names(const Term& term)
{
    std::set<std::string> used;
    collect_names(term, used);
    SurfaceRenamer r{std::move(used)};
    return r.go(term);
}

std::size_t term_size(const Term& term)
{
    return term.visit(overloaded{
        [](const node::Var&) -> std::size_t { return 1; },
        [](const node::Const&) -> std::size_t { return 1; },
        [](const node::OpApp& o) {
            std::size_t n = 1;
            for (const auto& a : o.args) n += term_size(a);
            return n;
        },
        [](const node::Tuple& tu) {
            std::size_t n = 1;
            for (const auto& a : tu.items) n += term_size(a);
            return n;
        },
        [](const node::TupleMatch& m) { return 1 + term_size(m.scrutinee) + term_size(m.body); },
        [](const node::Lambda& l) { return 1 + term_size(l.body); },
        [](const node::App& a) { return 1 + term_size(a.fn) + term_size(a.arg); },
        [](const node::Inject& i) { return 1 + term_size(i.payload); },
        [](const node::Case& c) {
            std::size_t n = 1 + term_size(c.scrutinee);
            for (const auto& b : c.branches) n += term_size(b.body);
            return n;
        },
        [](const node::Nil&) -> std::size_t { return 1; },
        [](const node::Cons& c) { return 1 + term_size(c.head) + term_size(c.tail); },
        [](const node::Fold& f) { return 1 + term_size(f.step) + term_size(f.list) + term_size(f.init); },
    });
}

} // namespace jetad
