#include <jetad/multi_index.hpp>

#include <algorithm>
#include <stdexcept>

namespace jetad {

MultiIndex MultiIndex::from_digits(std::string_view digits)
{
    std::vector<unsigned> entries;
    entries.reserve(digits.size());
    for (char c : digits) {
        if (c < '0' || c > '9') throw std::invalid_argument("multi-index digits must be 0-9: '" + std::string(digits) + "'");
        entries.push_back(static_cast<unsigned>(c - '0'));
    }
    return MultiIndex(std::move(entries));
}

bool MultiIndex::bounded_by(const MultiIndex& other) const noexcept
{
    if (dims() != other.dims()) return false;
    for (std::size_t i = 0; i < dims(); ++i)
        if (entries_[i] > other.entries_[i]) return false;
    return true;
}

std::string MultiIndex::digits() const
{
    std::string out;
    out.reserve(entries_.size());
    for (unsigned e : entries_) {
        if (e > 9) throw std::out_of_range("multi-index entry exceeds 9; no digit encoding");
        out.push_back(static_cast<char>('0' + e));
    }
    return out;
}

unsigned long long MultiIndex::factorial() const
{
    unsigned long long f = 1;
    for (unsigned e : entries_)
        for (unsigned i = 2; i <= e; ++i) f *= i;
    return f;
}

namespace {

void extend(std::size_t axis, unsigned budget, std::vector<unsigned>& current, std::vector<MultiIndex>& out)
{
    if (axis == current.size()) {
        out.emplace_back(current);
        return;
    }
    for (unsigned v = 0; v <= budget; ++v) {
        current[axis] = v;
        extend(axis + 1, budget - v, current, out);
    }
    current[axis] = 0;
}

} // namespace

std::vector<MultiIndex> multi_indices_up_to(std::size_t dims, unsigned max_degree)
{
    std::vector<MultiIndex> out;
    std::vector<unsigned> current(dims, 0U);
    extend(0, max_degree, current, out);
    return out;
}

unsigned long long binomial(unsigned n, unsigned k)
{
    if (k > n) return 0;
    k = std::min(k, n - k);
    unsigned long long r = 1;
    for (unsigned i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

} // namespace jetad
