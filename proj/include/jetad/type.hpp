#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace jetad {

struct TypeNode;

/// Object-language type. Immutable, cheap to copy (shared node).
///
/// A default-constructed Type is `real`.
class Type
{
public:
    enum class Kind
    {
        real,
        product,
        function,
        variant,
        list
    };

    Type();

    static Type real();
    static Type product(std::vector<Type> components);
    static Type function(Type domain, Type codomain);
    /// Constructor names must be pairwise distinct.
    static Type variant(std::vector<std::pair<std::string, Type>> constructors);
    static Type list(Type element);

    /// `real * ... * real` with `n` components.
    static Type real_power(std::size_t n);

    Kind kind() const noexcept;
    bool is_real() const noexcept { return kind() == Kind::real; }
    bool is_product() const noexcept { return kind() == Kind::product; }
    bool is_function() const noexcept { return kind() == Kind::function; }
    bool is_variant() const noexcept { return kind() == Kind::variant; }
    bool is_list() const noexcept { return kind() == Kind::list; }

    /// Product components, or variant payloads in constructor order.
    const std::vector<Type>& components() const noexcept;
    const Type& domain() const;
    const Type& codomain() const;
    const Type& element() const;

    const std::vector<std::string>& constructor_names() const noexcept;
    std::optional<std::size_t> constructor_index(std::string_view name) const;

    friend bool operator==(const Type& a, const Type& b);

private:
    explicit Type(std::shared_ptr<const TypeNode> node) : node_(std::move(node)) {}
    std::shared_ptr<const TypeNode> node_;
};

struct TypeNode
{
    Type::Kind kind = Type::Kind::real;
    std::vector<Type> children;
    std::vector<std::string> names;
};

/// Renders in the surface grammar, e.g. `(real * real) -> real`.
std::string to_string(const Type& type);

} // namespace jetad
