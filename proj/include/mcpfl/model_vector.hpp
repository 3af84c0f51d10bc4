#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mcpfl/errors.hpp"

namespace mcpfl {

struct LayoutBlock {
    std::string name;
    std::size_t offset;
    std::size_t length;

    bool operator==(const LayoutBlock&) const = default;
};

// Named, contiguous, non-overlapping partition of a flat parameter vector.
class Layout {
public:
    Layout() = default;

    // Blocks are laid out in the given order, offsets assigned contiguously.
    static std::shared_ptr<const Layout> make(
        const std::vector<std::pair<std::string, std::size_t>>& block_sizes);

    const std::vector<LayoutBlock>& blocks() const { return blocks_; }
    std::size_t total_size() const { return total_; }

    bool has_block(std::string_view name) const;
    const LayoutBlock& block(std::string_view name) const;  // throws LayoutError

    bool operator==(const Layout& other) const { return blocks_ == other.blocks_; }

private:
    std::vector<LayoutBlock> blocks_;
    std::size_t total_ = 0;
};

using LayoutPtr = std::shared_ptr<const Layout>;

// Flat real-valued parameter vector with a named block layout. Vectors are
// combinable only when their layouts compare equal.
struct ModelVector {
    LayoutPtr layout;
    std::vector<double> values;

    ModelVector() = default;
    explicit ModelVector(LayoutPtr l) : layout(std::move(l)), values(layout->total_size(), 0.0) {}
    ModelVector(LayoutPtr l, std::vector<double> v);

    std::size_t size() const { return values.size(); }

    std::span<double> block(std::string_view name);
    std::span<const double> block(std::string_view name) const;

    bool same_layout(const ModelVector& other) const;
};

// result[i] = a * x[i] + y[i]; throws LayoutError on layout mismatch.
ModelVector vec_axpy(double a, const ModelVector& x, const ModelVector& y);

ModelVector vec_scale(double a, const ModelVector& x);

double dot(const ModelVector& x, const ModelVector& y);

double l2_norm(const ModelVector& x);

}  // namespace mcpfl
