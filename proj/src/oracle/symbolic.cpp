#include <jetad/oracle/symbolic.hpp>

#include <cmath>
#include <stdexcept>

namespace jetad::oracle {

struct SymAtom
{
    enum class Kind
    {
        var,
        sigmoid,
        exp,
        function
    };
    Kind kind = Kind::var;
    std::size_t index = 0;
    std::string name;
    MultiIndex derivative;
    std::vector<Sym> args;
    std::string key;
};

namespace {

std::string rational_text(const Rational& r)
{
    auto s = std::to_string(r.numerator());
    if (r.denominator() != 1) s += "/" + std::to_string(r.denominator());
    return s;
}

} // namespace

Sym Sym::atom(std::shared_ptr<const SymAtom> a)
{
    Sym s;
    s.terms_[{{a->key, 1U}}] = Rational(1);
    s.atoms_.emplace(a->key, std::move(a));
    return s;
}

Sym Sym::constant(Rational c)
{
    Sym s;
    if (c.numerator() != 0) s.terms_[{}] = c;
    return s;
}

Sym Sym::var(std::size_t i)
{
    auto a = std::make_shared<SymAtom>();
    a->kind = SymAtom::Kind::var;
    a->index = i;
    a->key = "x" + std::to_string(i);
    return atom(std::move(a));
}

Sym Sym::sigmoid(const Sym& arg)
{
    auto a = std::make_shared<SymAtom>();
    a->kind = SymAtom::Kind::sigmoid;
    a->args = {arg};
    a->key = "sigmoid(" + arg.to_string() + ")";
    return atom(std::move(a));
}

Sym Sym::exp(const Sym& arg)
{
    auto a = std::make_shared<SymAtom>();
    a->kind = SymAtom::Kind::exp;
    a->args = {arg};
    a->key = "exp(" + arg.to_string() + ")";
    return atom(std::move(a));
}

Sym Sym::function(const std::string& name, const MultiIndex& derivative, std::vector<Sym> args)
{
    if (derivative.dims() != args.size()) throw std::invalid_argument("Sym::function: derivative/argument count mismatch");
    auto a = std::make_shared<SymAtom>();
    a->kind = SymAtom::Kind::function;
    a->name = name;
    a->derivative = derivative;
    a->key = name + "[";
    for (auto e : derivative.entries()) a->key += std::to_string(e) + ",";
    a->key += "](";
    for (std::size_t i = 0; i < args.size(); ++i) a->key += (i ? ";" : "") + args[i].to_string();
    a->key += ")";
    a->args = std::move(args);
    return atom(std::move(a));
}

void Sym::merge_atoms(const Sym& other)
{
    for (const auto& [k, a] : other.atoms_) atoms_.emplace(k, a);
}

void Sym::add_term(const Monomial& m, Rational c)
{
    if (c.numerator() == 0) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second.numerator() == 0) terms_.erase(it);
    }
}

Sym operator+(const Sym& a, const Sym& b)
{
    Sym out = a;
    out.merge_atoms(b);
    for (const auto& [m, c] : b.terms_) out.add_term(m, c);
    return out;
}

Sym operator-(const Sym& a, const Sym& b) { return a + Sym::constant(Rational(-1)) * b; }

Sym operator*(const Sym& a, const Sym& b)
{
    Sym out;
    out.merge_atoms(a);
    out.merge_atoms(b);
    for (const auto& [ma, ca] : a.terms_) {
        for (const auto& [mb, cb] : b.terms_) {
            Sym::Monomial m = ma;
            for (const auto& [k, e] : mb) m[k] += e;
            out.add_term(m, ca * cb);
        }
    }
    return out;
}

bool operator==(const Sym& a, const Sym& b) { return a.terms_ == b.terms_; }

Sym Sym::derivative(std::size_t i) const
{
    // d(atom)/dx_i, memoised per call.
    std::map<std::string, Sym> datom;
    auto d_of = [&](const SymAtom& a) -> const Sym& {
        if (auto it = datom.find(a.key); it != datom.end()) return it->second;
        Sym d;
        switch (a.kind) {
        case SymAtom::Kind::var:
            d = Sym::constant(Rational(a.index == i ? 1 : 0));
            break;
        case SymAtom::Kind::sigmoid: {
            Sym s = Sym::sigmoid(a.args[0]);
            d = (s - s * s) * a.args[0].derivative(i);
            break;
        }
        case SymAtom::Kind::exp:
            d = Sym::exp(a.args[0]) * a.args[0].derivative(i);
            break;
        case SymAtom::Kind::function:
            for (std::size_t j = 0; j < a.args.size(); ++j) {
                Sym dj = a.args[j].derivative(i);
                if (dj.is_zero()) continue;
                MultiIndex beta = a.derivative;
                ++beta[j];
                d = d + Sym::function(a.name, beta, a.args) * dj;
            }
            break;
        }
        return datom.emplace(a.key, std::move(d)).first->second;
    };

    Sym out;
    for (const auto& [m, c] : terms_) {
        for (const auto& [k, e] : m) {
            const Sym& da = d_of(*atoms_.at(k));
            if (da.is_zero()) continue;
            Monomial rest = m;
            if (--rest[k] == 0) rest.erase(k);
            Sym r;
            r.atoms_ = atoms_;
            r.terms_[rest] = c * Rational(static_cast<long long>(e));
            out = out + r * da;
        }
    }
    return out;
}

std::string Sym::to_string() const
{
    if (terms_.empty()) return "0";
    std::string out;
    for (const auto& [m, c] : terms_) {
        if (!out.empty()) out += " + ";
        out += rational_text(c);
        for (const auto& [k, e] : m) {
            out += "*" + k;
            if (e > 1) out += "^" + std::to_string(e);
        }
    }
    return out;
}

double Sym::eval(std::span<const double> x, const FunctionTable& functions) const
{
    std::map<std::string, double> cache;
    auto atom_value = [&](const SymAtom& a) {
        if (auto it = cache.find(a.key); it != cache.end()) return it->second;
        double v = 0.0;
        switch (a.kind) {
        case SymAtom::Kind::var:
            v = x[a.index];
            break;
        case SymAtom::Kind::sigmoid:
            v = 1.0 / (1.0 + std::exp(-a.args[0].eval(x, functions)));
            break;
        case SymAtom::Kind::exp:
            v = std::exp(a.args[0].eval(x, functions));
            break;
        case SymAtom::Kind::function: {
            auto it = functions.find(a.name);
            if (it == functions.end()) throw std::invalid_argument("no numeric value for function '" + a.name + "'");
            std::vector<double> args;
            for (const auto& s : a.args) args.push_back(s.eval(x, functions));
            v = it->second(a.derivative, args);
            break;
        }
        }
        cache.emplace(a.key, v);
        return v;
    };
    double total = 0.0;
    for (const auto& [m, c] : terms_) {
        double t = static_cast<double>(c.numerator()) / static_cast<double>(c.denominator());
        for (const auto& [k, e] : m) t *= std::pow(atom_value(*atoms_.at(k)), static_cast<int>(e));
        total += t;
    }
    return total;
}

std::vector<Sym> sym_derivs(const Sym& e, unsigned order)
{
    std::vector<Sym> out{e};
    for (unsigned i = 0; i < order; ++i) out.push_back(out.back().derivative(0));
    return out;
}

namespace {

std::vector<Sym> inner_functions(std::size_t k, std::size_t l, const MultiIndex& d)
{
    std::vector<Sym> xs;
    for (std::size_t i = 0; i < k; ++i) xs.push_back(Sym::var(i));
    std::vector<Sym> fs;
    for (std::size_t j = 0; j < l; ++j) fs.push_back(Sym::function("f" + std::to_string(j + 1), d, xs));
    return fs;
}

} // namespace

Sym chain_rule_by_differentiation(const MultiIndex& alpha, std::size_t l)
{
    const std::size_t k = alpha.dims();
    Sym e = Sym::function("g", MultiIndex::zero(l), inner_functions(k, l, MultiIndex::zero(k)));
    for (std::size_t c = 0; c < k; ++c)
        for (unsigned n = 0; n < alpha[c]; ++n) e = e.derivative(c);
    return e;
}

Sym chain_rule_from_fdb(const MultiIndex& alpha, std::size_t l)
{
    const std::size_t k = alpha.dims();
    std::vector<Sym> xs;
    for (std::size_t i = 0; i < k; ++i) xs.push_back(Sym::var(i));
    const auto fs = inner_functions(k, l, MultiIndex::zero(k));
    Sym total;
    for (const auto& term : enumerate_fdb(alpha, l)) {
        Sym t = Sym::constant(term.coefficient) * Sym::function("g", term.beta, fs);
        for (const auto& f : term.factors)
            for (std::size_t j = 0; j < l; ++j)
                for (unsigned e = 0; e < f.exponents[j]; ++e)
                    t = t * Sym::function("f" + std::to_string(j + 1), f.part, xs);
        total = total + t;
    }
    return total;
}

} // namespace jetad::oracle
