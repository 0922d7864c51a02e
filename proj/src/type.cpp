#include <jetad/type.hpp>

#include <set>
#include <stdexcept>

namespace jetad {

namespace {

std::shared_ptr<const TypeNode> real_node()
{
    static const auto node = std::make_shared<const TypeNode>();
    return node;
}

} // namespace

Type::Type() : node_(real_node()) {}

Type Type::real() { return Type{}; }

Type Type::product(std::vector<Type> components)
{
    if (components.empty()) throw std::invalid_argument("product type needs at least one component");
    auto node = std::make_shared<TypeNode>();
    node->kind = Kind::product;
    node->children = std::move(components);
    return Type{std::move(node)};
}

Type Type::function(Type domain, Type codomain)
{
    auto node = std::make_shared<TypeNode>();
    node->kind = Kind::function;
    node->children = {std::move(domain), std::move(codomain)};
    return Type{std::move(node)};
}

Type Type::variant(std::vector<std::pair<std::string, Type>> constructors)
{
    if (constructors.empty()) throw std::invalid_argument("variant type needs at least one constructor");
    auto node = std::make_shared<TypeNode>();
    node->kind = Kind::variant;
    std::set<std::string> seen;
    for (auto& [name, payload] : constructors) {
        if (!seen.insert(name).second) throw std::invalid_argument("duplicate constructor '" + name + "' in variant type");
        node->names.push_back(std::move(name));
        node->children.push_back(std::move(payload));
    }
    return Type{std::move(node)};
}

Type Type::list(Type element)
{
    auto node = std::make_shared<TypeNode>();
    node->kind = Kind::list;
    node->children = {std::move(element)};
    return Type{std::move(node)};
}

Type Type::real_power(std::size_t n) { return product(std::vector<Type>(n, real())); }

Type::Kind Type::kind() const noexcept { return node_->kind; }

const std::vector<Type>& Type::components() const noexcept { return node_->children; }

const Type& Type::domain() const
{
    if (!is_function()) throw std::logic_error("domain() of non-function type");
    return node_->children[0];
}

const Type& Type::codomain() const
{
    if (!is_function()) throw std::logic_error("codomain() of non-function type");
    return node_->children[1];
}

const Type& Type::element() const
{
    if (!is_list()) throw std::logic_error("element() of non-list type");
    return node_->children[0];
}

const std::vector<std::string>& Type::constructor_names() const noexcept { return node_->names; }

std::optional<std::size_t> Type::constructor_index(std::string_view name) const
{
    const auto& names = node_->names;
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == name) return i;
    return std::nullopt;
}

bool operator==(const Type& a, const Type& b)
{
    if (a.node_ == b.node_) return true;
    return a.node_->kind == b.node_->kind && a.node_->names == b.node_->names && a.node_->children == b.node_->children;
}

} // namespace jetad
