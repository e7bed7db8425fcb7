#ifndef DCLOCATE_IO_HPP
#define DCLOCATE_IO_HPP

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "dclocate/convex_sets.hpp"
#include "dclocate/errors.hpp"
#include "dclocate/fermat_torricelli.hpp"
#include "dclocate/multifacility.hpp"

namespace dclocate {

// 17 significant digits round-trip any double exactly.
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

inline std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    for (;;) {
        const auto comma = line.find(',', start);
        fields.push_back(trim(line.substr(start, comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return fields;
}

inline double parse_number(std::string_view field, std::size_t line) {
    if (field.empty()) throw ParseError(line, "empty field");
    if (field.front() == '+') field.remove_prefix(1);
    double value = 0.0;
    const auto* end = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(field.data(), end, value);
    if (ec != std::errc() || ptr != end)
        throw ParseError(line, "'" + std::string(field) + "' is not a number");
    if (!std::isfinite(value)) throw ParseError(line, "non-finite value");
    return value;
}

// Blank lines and lines starting with '#' carry no data.
inline bool is_data_line(std::string_view line) {
    const auto t = trim(line);
    return !t.empty() && t.front() != '#';
}

inline std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open '" + path + "'");
    return in;
}

}  // namespace detail

struct CsvOptions {
    // 0-based column holding the anchor weight; the other columns are coordinates.
    std::optional<std::size_t> weights_col;
    bool has_header = false;
};

struct PointTable {
    Matrix points;
    std::optional<Vector> weights;
};

inline PointTable read_points_csv(std::istream& in, const CsvOptions& options = {}) {
    std::vector<std::vector<double>> rows;
    std::vector<double> weights;
    std::string line;
    std::size_t line_no = 0;
    std::size_t columns = 0;
    bool header_pending = options.has_header;
    while (std::getline(in, line)) {
        ++line_no;
        if (!detail::is_data_line(line)) continue;
        if (header_pending) {
            header_pending = false;
            continue;
        }
        const auto fields = detail::split_fields(line);
        if (columns == 0) columns = fields.size();
        if (fields.size() != columns)
            throw ParseError(line_no, "expected " + std::to_string(columns) + " columns, found " +
                                          std::to_string(fields.size()));
        if (options.weights_col && *options.weights_col >= columns)
            throw ParseError(line_no, "weights column " + std::to_string(*options.weights_col) +
                                          " is out of range");
        std::vector<double> coords;
        coords.reserve(columns);
        for (std::size_t c = 0; c < columns; ++c) {
            const double value = detail::parse_number(fields[c], line_no);
            if (options.weights_col && c == *options.weights_col)
                weights.push_back(value);
            else
                coords.push_back(value);
        }
        if (coords.empty()) throw ParseError(line_no, "no coordinate columns");
        rows.push_back(std::move(coords));
    }
    if (rows.empty()) throw ValidationError("no data rows");
    PointTable table;
    const auto n = static_cast<Eigen::Index>(rows.front().size());
    table.points.resize(static_cast<Eigen::Index>(rows.size()), n);
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (Eigen::Index d = 0; d < n; ++d)
            table.points(static_cast<Eigen::Index>(i), d) = rows[i][static_cast<std::size_t>(d)];
    if (options.weights_col)
        table.weights = Eigen::Map<const Vector>(weights.data(), static_cast<Eigen::Index>(weights.size()));
    return table;
}

inline PointTable load_points_csv(const std::string& path, const CsvOptions& options = {}) {
    auto in = detail::open_input(path);
    return read_points_csv(in, options);
}

// Without a weights column every anchor gets weight 1. Zero weights are rejected.
inline WeightedAnchors load_weighted_anchors_csv(const std::string& path, const CsvOptions& options = {}) {
    auto table = load_points_csv(path, options);
    Vector weights = table.weights ? *table.weights : Vector::Ones(table.points.rows());
    return WeightedAnchors(std::move(table.points), std::move(weights));
}

inline AnchorMatrix load_anchor_matrix_csv(const std::string& path, const CsvOptions& options = {}) {
    auto table = load_points_csv(path, options);
    return AnchorMatrix(std::move(table.points));
}

// One row per point, weights (if any) in the last column.
inline void write_points_csv(std::ostream& out, const Matrix& points,
                             const std::optional<Vector>& weights = std::nullopt) {
    for (Eigen::Index i = 0; i < points.rows(); ++i) {
        for (Eigen::Index d = 0; d < points.cols(); ++d) {
            if (d > 0) out << ',';
            out << format_double(points(i, d));
        }
        if (weights) out << ',' << format_double((*weights)[i]);
        out << '\n';
    }
}

// Rows: "ball,c1,...,cn,r", "box,l1,...,ln,u1,...,un" or "point,p1,...,pn".
inline std::vector<TargetSet> read_sets_csv(std::istream& in) {
    std::vector<TargetSet> sets;
    std::string line;
    std::size_t line_no = 0;
    Eigen::Index dim = -1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!detail::is_data_line(line)) continue;
        const auto fields = detail::split_fields(line);
        const std::string_view kind = fields.front();
        std::vector<double> values;
        for (std::size_t c = 1; c < fields.size(); ++c)
            values.push_back(detail::parse_number(fields[c], line_no));
        const auto as_vector = [](const double* p, std::size_t n) {
            return Vector(Eigen::Map<const Vector>(p, static_cast<Eigen::Index>(n)));
        };
        std::optional<TargetSet> set;
        try {
            if (kind == "ball") {
                if (values.size() < 2) throw ParseError(line_no, "ball needs a center and a radius");
                const double radius = values.back();
                if (radius < 0.0) throw ValidationError("line " + std::to_string(line_no) + ": negative radius");
                set = TargetSet::ball(as_vector(values.data(), values.size() - 1), radius);
            } else if (kind == "box") {
                if (values.size() < 2 || values.size() % 2 != 0)
                    throw ParseError(line_no, "box needs matching lower and upper bounds");
                const auto n = values.size() / 2;
                set = TargetSet::box(as_vector(values.data(), n), as_vector(values.data() + n, n));
            } else if (kind == "point") {
                if (values.empty()) throw ParseError(line_no, "point needs coordinates");
                set = TargetSet::singleton(as_vector(values.data(), values.size()));
            } else {
                throw ParseError(line_no, "unknown set kind '" + std::string(kind) + "'");
            }
        } catch (const ValidationError& e) {
            const std::string msg = e.what();
            if (msg.rfind("line ", 0) == 0) throw;
            throw ValidationError("line " + std::to_string(line_no) + ": " + msg);
        }
        if (dim < 0) dim = set->dim();
        if (set->dim() != dim)
            throw ValidationError("line " + std::to_string(line_no) + ": set of dimension " +
                                  std::to_string(set->dim()) + " mixed with dimension " + std::to_string(dim));
        sets.push_back(std::move(*set));
    }
    if (sets.empty()) throw ValidationError("no target sets");
    return sets;
}

inline std::vector<TargetSet> load_sets_csv(const std::string& path) {
    auto in = detail::open_input(path);
    return read_sets_csv(in);
}

inline void write_sets_csv(std::ostream& out, const std::vector<TargetSet>& sets) {
    const auto write_vec = [&](const Vector& v) {
        for (Eigen::Index d = 0; d < v.size(); ++d) out << ',' << format_double(v[d]);
    };
    for (const auto& set : sets) {
        std::visit(
            [&](const auto& s) {
                using T = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<T, BallSet>) {
                    out << "ball";
                    write_vec(s.center);
                    out << ',' << format_double(s.radius);
                } else if constexpr (std::is_same_v<T, BoxSet>) {
                    out << "box";
                    write_vec(s.lower);
                    write_vec(s.upper);
                } else {
                    out << "point";
                    write_vec(s.point);
                }
            },
            set.variant());
        out << '\n';
    }
}

// 44 anchors in R^2: ten points on the unit circle around each of
// (5,5), (5,-5), (-5,5), (-5,-5) with weight 1, then (0,0), (1,2), (-3,-1),
// (-2,3) with weight -2.
inline WeightedAnchors make_example1_fixture() {
    const double centers[4][2] = {{5.0, 5.0}, {5.0, -5.0}, {-5.0, 5.0}, {-5.0, -5.0}};
    const double negatives[4][2] = {{0.0, 0.0}, {1.0, 2.0}, {-3.0, -1.0}, {-2.0, 3.0}};
    Matrix anchors(44, 2);
    Vector weights(44);
    Eigen::Index row = 0;
    for (const auto& c : centers) {
        for (int j = 1; j <= 10; ++j) {
            const double angle = j * std::numbers::pi / 5.0;
            anchors(row, 0) = c[0] + std::cos(angle);
            anchors(row, 1) = c[1] + std::sin(angle);
            weights[row++] = 1.0;
        }
    }
    for (const auto& a : negatives) {
        anchors(row, 0) = a[0];
        anchors(row, 1) = a[1];
        weights[row++] = -2.0;
    }
    return WeightedAnchors(std::move(anchors), std::move(weights));
}

// Synthetic large instance: `positives` normally distributed anchors of
// weight 1 plus three anchors of weight -1000 drawn near the cloud.
inline WeightedAnchors make_heavy_negative_fixture(std::uint64_t seed, Eigen::Index positives = 10000) {
    SplitMix64 rng(seed);
    const auto normal = [&rng] {
        // Box-Muller on (0, 1] uniforms.
        const double u1 = 1.0 - rng.uniform();
        const double u2 = rng.uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    };
    Matrix anchors(positives + 3, 2);
    Vector weights(positives + 3);
    for (Eigen::Index i = 0; i < positives; ++i) {
        anchors(i, 0) = 20.0 + 25.0 * normal();
        anchors(i, 1) = 120.0 + 25.0 * normal();
        weights[i] = 1.0;
    }
    for (Eigen::Index j = 0; j < 3; ++j) {
        anchors(positives + j, 0) = 20.0 + 15.0 * normal();
        anchors(positives + j, 1) = 120.0 + 15.0 * normal();
        weights[positives + j] = -1000.0;
    }
    return WeightedAnchors(std::move(anchors), std::move(weights));
}

// A city given by latitude (deg N), longitude (deg E, negative for W) and
// land area in square miles.
struct City {
    std::string name;
    double latitude;
    double longitude;
    double area_sq_mi;
};

// Expects "name,latitude,longitude,area" with longitude signed east.
inline std::vector<City> read_cities_csv(std::istream& in) {
    std::vector<City> cities;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!detail::is_data_line(line)) continue;
        const auto fields = detail::split_fields(line);
        if (fields.size() != 4) throw ParseError(line_no, "expected name,latitude,longitude,area");
        if (fields[1] == "latitude") continue;
        City c{std::string(fields[0]), detail::parse_number(fields[1], line_no),
               detail::parse_number(fields[2], line_no), detail::parse_number(fields[3], line_no)};
        if (c.area_sq_mi < 0.0) throw ValidationError("line " + std::to_string(line_no) + ": negative area");
        cities.push_back(std::move(c));
    }
    return cities;
}

// Each city becomes a ball at (latitude, longitude) of radius 0.1 sqrt(A / pi).
inline std::vector<TargetSet> cities_to_balls(const std::vector<City>& cities) {
    std::vector<TargetSet> sets;
    sets.reserve(cities.size());
    for (const auto& c : cities) {
        Vector center(2);
        center << c.latitude, c.longitude;
        sets.push_back(TargetSet::ball(std::move(center), 0.1 * std::sqrt(c.area_sq_mi / std::numbers::pi)));
    }
    return sets;
}

// "36.2350°N 77.7130°W" style rendering of a (latitude, east longitude) pair.
inline std::string format_geographic(double latitude, double longitude) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4f°%c %.4f°%c", std::abs(latitude), latitude < 0 ? 'S' : 'N',
                  std::abs(longitude), longitude < 0 ? 'W' : 'E');
    return buf;
}

}  // namespace dclocate

#endif  // DCLOCATE_IO_HPP
