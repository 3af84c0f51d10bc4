#include "mcpfl/model_vector.hpp"

#include <cmath>

namespace mcpfl {

std::shared_ptr<const Layout> Layout::make(
    const std::vector<std::pair<std::string, std::size_t>>& block_sizes) {
    auto layout = std::make_shared<Layout>();
    std::size_t offset = 0;
    for (const auto& [name, len] : block_sizes) {
        layout->blocks_.push_back({name, offset, len});
        offset += len;
    }
    layout->total_ = offset;
    return layout;
}

bool Layout::has_block(std::string_view name) const {
    for (const auto& b : blocks_)
        if (b.name == name) return true;
    return false;
}

const LayoutBlock& Layout::block(std::string_view name) const {
    for (const auto& b : blocks_)
        if (b.name == name) return b;
    throw LayoutError("no such block: " + std::string(name));
}

ModelVector::ModelVector(LayoutPtr l, std::vector<double> v)
    : layout(std::move(l)), values(std::move(v)) {
    if (values.size() != layout->total_size())
        throw LayoutError("value count does not match layout size");
}

std::span<double> ModelVector::block(std::string_view name) {
    const auto& b = layout->block(name);
    return {values.data() + b.offset, b.length};
}

std::span<const double> ModelVector::block(std::string_view name) const {
    const auto& b = layout->block(name);
    return {values.data() + b.offset, b.length};
}

bool ModelVector::same_layout(const ModelVector& other) const {
    if (layout == other.layout) return true;
    return layout && other.layout && *layout == *other.layout;
}

ModelVector vec_axpy(double a, const ModelVector& x, const ModelVector& y) {
    if (!x.same_layout(y)) throw LayoutError("vec_axpy: layout mismatch");
    ModelVector out = y;
    for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] += a * x.values[i];
    return out;
}

ModelVector vec_scale(double a, const ModelVector& x) {
    ModelVector out = x;
    for (double& v : out.values) v *= a;
    return out;
}

double dot(const ModelVector& x, const ModelVector& y) {
    if (!x.same_layout(y)) throw LayoutError("dot: layout mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < x.values.size(); ++i) s += x.values[i] * y.values[i];
    return s;
}

double l2_norm(const ModelVector& x) {
    double s = 0.0;
    for (double v : x.values) s += v * v;
    return std::sqrt(s);
}

}  // namespace mcpfl
