#pragma once

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <string>
#include <string_view>
#include <vector>

namespace jetad {

/// A tuple of naturals selecting the mixed partial
/// d^{|a|} / dx_1^{a_1} ... dx_k^{a_k}. Ordered lexicographically.
class MultiIndex
{
public:
    MultiIndex() = default;
    explicit MultiIndex(std::vector<unsigned> entries) : entries_(std::move(entries)) {}
    MultiIndex(std::initializer_list<unsigned> entries) : entries_(entries) {}

    static MultiIndex zero(std::size_t dims) { return MultiIndex(std::vector<unsigned>(dims, 0U)); }
    static MultiIndex unit(std::size_t dims, std::size_t axis, unsigned value = 1)
    {
        auto m = zero(dims);
        m.entries_[axis] = value;
        return m;
    }
    /// Inverse of digits(); every character must be '0'..'9'.
    static MultiIndex from_digits(std::string_view digits);

    std::size_t dims() const noexcept { return entries_.size(); }
    unsigned degree() const noexcept { return std::accumulate(entries_.begin(), entries_.end(), 0U); }
    bool is_zero() const noexcept { return degree() == 0; }

    unsigned operator[](std::size_t i) const { return entries_[i]; }
    unsigned& operator[](std::size_t i) { return entries_[i]; }
    const std::vector<unsigned>& entries() const noexcept { return entries_; }

    /// Componentwise <=.
    bool bounded_by(const MultiIndex& other) const noexcept;

    /// Concatenated decimal digits, e.g. (1,0) -> "10". Entries must be <= 9.
    std::string digits() const;

    /// Product of factorials of the entries.
    unsigned long long factorial() const;

    friend auto operator<=>(const MultiIndex&, const MultiIndex&) = default;
    friend bool operator==(const MultiIndex&, const MultiIndex&) = default;

private:
    std::vector<unsigned> entries_;
};

/// All multi-indices in `dims` dimensions with degree <= max_degree, in
/// lexicographic order.
std::vector<MultiIndex> multi_indices_up_to(std::size_t dims, unsigned max_degree);

/// n choose k, exact.
unsigned long long binomial(unsigned n, unsigned k);

} // namespace jetad
