#include "iterplan/workspace.hpp"

#include "iterplan/error.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <limits>

namespace iterplan {

GridMap build_grid(Point origin, double pitch, std::uint32_t rows, std::uint32_t cols, double axis_heading)
{
    if (!(pitch > 0) || rows == 0 || cols == 0)
        throw ValidationError("grid needs positive pitch, rows and cols");
    if (std::size_t{rows} * cols > std::numeric_limits<CellId>::max())
        throw ValidationError("grid too large");
    return GridMap{origin, pitch, rows, cols, axis_heading};
}

Point cell_center(const GridMap& map, CellId id)
{
    if (!map.contains(id))
        throw ValidationError("cell id " + std::to_string(id) + " outside the grid");
    Point local{(map.col(id) + 0.5) * map.pitch, (map.row(id) + 0.5) * map.pitch};
    return map.origin + rotate(local, map.axis_heading);
}

std::string letters_of_row(std::uint32_t row)
{
    std::string out;
    std::uint64_t n = std::uint64_t{row} + 1;
    while (n > 0) {
        --n;
        out.insert(out.begin(), static_cast<char>('A' + n % 26));
        n /= 26;
    }
    return out;
}

std::uint32_t row_of_letters(std::string_view letters)
{
    if (letters.empty() || letters.size() > 6)
        throw ValidationError("bad row letters '" + std::string(letters) + "'");
    std::uint64_t n = 0;
    for (char c : letters) {
        if (c < 'A' || c > 'Z')
            throw ValidationError("bad row letters '" + std::string(letters) + "'");
        n = n * 26 + static_cast<std::uint64_t>(c - 'A' + 1);
    }
    return static_cast<std::uint32_t>(n - 1);
}

std::string name_of(const GridMap& map, CellId id)
{
    if (!map.contains(id))
        throw ValidationError("cell id " + std::to_string(id) + " outside the grid");
    return letters_of_row(map.row(id)) + std::to_string(map.col(id) + 1);
}

CellId id_of(const GridMap& map, std::string_view name)
{
    std::size_t split = 0;
    while (split < name.size() && std::isupper(static_cast<unsigned char>(name[split])))
        ++split;
    std::string_view digits = name.substr(split);
    std::uint32_t col = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), col);
    if (split == 0 || digits.empty() || ec != std::errc() || ptr != digits.data() + digits.size() || col == 0 ||
        digits.front() == '0')
        throw ValidationError("malformed cell name '" + std::string(name) + "'");
    std::uint32_t row = row_of_letters(name.substr(0, split));
    if (row >= map.rows || col > map.cols)
        throw ValidationError("cell '" + std::string(name) + "' outside the grid");
    return map.at(row, col - 1);
}

bool RegionSet::contains(CellId id) const
{
    return std::binary_search(members.begin(), members.end(), id);
}

RegionSet rectangle(const GridMap& map, CellId corner, std::uint32_t rows, std::uint32_t cols, std::string name)
{
    if (!map.contains(corner) || rows == 0 || cols == 0 || map.row(corner) + rows > map.rows ||
        map.col(corner) + cols > map.cols)
        throw ValidationError("rectangle does not fit the grid");
    RegionSet r{std::move(name), {}};
    for (std::uint32_t i = 0; i < rows; ++i) {
        for (std::uint32_t j = 0; j < cols; ++j)
            r.members.push_back(map.at(map.row(corner) + i, map.col(corner) + j));
    }
    return r;
}

RegionSet parse_region(std::string_view text, const GridMap& map, std::string name)
{
    RegionSet out{std::move(name), {}};
    std::size_t line_no = 0;
    while (!text.empty()) {
        ++line_no;
        std::size_t eol = text.find('\n');
        std::string_view line = text.substr(0, eol);
        text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
        if (auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        std::string compact;
        for (char c : line) {
            if (!std::isspace(static_cast<unsigned char>(c)))
                compact += c;
        }
        if (compact.empty())
            continue;
        try {
            auto at = compact.find('@');
            if (at == std::string::npos) {
                out.members.push_back(id_of(map, compact));
                continue;
            }
            std::string_view spec = std::string_view(compact).substr(at + 1);
            auto x = spec.find_first_of("xX");
            std::uint32_t rows = 0, cols = 0;
            auto r1 = std::from_chars(spec.data(), spec.data() + (x == std::string_view::npos ? 0 : x), rows);
            auto r2 = x == std::string_view::npos
                          ? std::from_chars_result{spec.data(), std::errc::invalid_argument}
                          : std::from_chars(spec.data() + x + 1, spec.data() + spec.size(), cols);
            if (r1.ec != std::errc() || r2.ec != std::errc() || r2.ptr != spec.data() + spec.size())
                throw ValidationError("malformed rectangle '" + compact + "'");
            auto rect = rectangle(map, id_of(map, std::string_view(compact).substr(0, at)), rows, cols);
            out.members.insert(out.members.end(), rect.members.begin(), rect.members.end());
        }
        catch (const ValidationError& e) {
            throw ValidationError("region line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    std::sort(out.members.begin(), out.members.end());
    out.members.erase(std::unique(out.members.begin(), out.members.end()), out.members.end());
    return out;
}

} // namespace iterplan
