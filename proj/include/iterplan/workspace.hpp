#pragma once

#include "iterplan/geometry.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace iterplan {

using CellId = std::uint32_t;

/// Rectangular grid of square cells, numbered row-major from 0.
/// Cell (row, col) has its center at origin + ((col+0.5)·pitch, (row+0.5)·pitch)
/// rotated by axis_heading.
struct GridMap {
    Point origin;
    double pitch = 50;
    std::uint32_t rows = 1;
    std::uint32_t cols = 1;
    double axis_heading = 0;

    [[nodiscard]] std::size_t size() const { return std::size_t{rows} * cols; }
    [[nodiscard]] std::uint32_t row(CellId id) const { return id / cols; }
    [[nodiscard]] std::uint32_t col(CellId id) const { return id % cols; }
    [[nodiscard]] CellId at(std::uint32_t row, std::uint32_t col) const { return row * cols + col; }
    [[nodiscard]] bool contains(CellId id) const { return id < size(); }
};

/// Throws ValidationError for non-positive pitch or dimensions.
[[nodiscard]] GridMap build_grid(Point origin, double pitch, std::uint32_t rows, std::uint32_t cols,
                                 double axis_heading = 0);

[[nodiscard]] Point cell_center(const GridMap& map, CellId id);

/// Spreadsheet-style row letters (A..Z, AA..) plus a 1-based column: id 0 is "A1".
[[nodiscard]] std::string name_of(const GridMap& map, CellId id);
[[nodiscard]] CellId id_of(const GridMap& map, std::string_view name);

/// Row index for letters "A", "B", ..., "AA"; throws ValidationError if malformed.
[[nodiscard]] std::uint32_t row_of_letters(std::string_view letters);
[[nodiscard]] std::string letters_of_row(std::uint32_t row);

struct RegionSet {
    std::string name;
    std::vector<CellId> members; // sorted, unique

    [[nodiscard]] bool contains(CellId id) const;
};

/// Parses a region file: one cell name or `NAME@ROWSxCOLS` rectangle per line,
/// `#` comments. Throws ValidationError with the line number on bad input.
[[nodiscard]] RegionSet parse_region(std::string_view text, const GridMap& map, std::string name = "");

[[nodiscard]] RegionSet rectangle(const GridMap& map, CellId corner, std::uint32_t rows, std::uint32_t cols,
                                  std::string name = "");

enum class IdealMode : std::uint8_t { tour, open_path };

/// Exact shortest closed tour (back to start) or open path from `start`
/// through every target. Throws ValidationError beyond 12 targets.
[[nodiscard]] double ideal_distance(Point start, std::span<const Point> targets, IdealMode mode);

/// Contiguous-region lower bound: (|region| - 1)·pitch plus the distance from
/// `start` to the nearest region cell center. Zero for an empty region.
[[nodiscard]] double ideal_cover_distance(const GridMap& map, Point start, const RegionSet& region);

} // namespace iterplan
