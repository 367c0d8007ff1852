#include "sgpdt/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "sgpdt/error.hpp"

namespace sgpdt {

namespace {

std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

std::vector<std::string_view> split_fields(std::string_view line)
{
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        fields.push_back(trim(line.substr(start, comma == std::string_view::npos ? comma : comma - start)));
        if (comma == std::string_view::npos) {
            break;
        }
        start = comma + 1;
    }
    return fields;
}

bool parse_number(std::string_view field, double& value)
{
    if (!field.empty() && field.front() == '+') {
        field.remove_prefix(1);
    }
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    return ec == std::errc{} && ptr == field.data() + field.size();
}

std::string format_double(double value)
{
    char buffer[64];
    auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
    return std::string(buffer, end);
}

} // namespace

Dataset Dataset::subset(std::span<const std::size_t> rows) const
{
    Dataset out;
    out.name = name;
    out.feature_names = feature_names;
    out.features = features.select_rows(rows);
    out.targets.reserve(rows.size());
    for (std::size_t r : rows) {
        out.targets.push_back(targets.at(r));
    }
    return out;
}

Dataset parse_csv(const std::string& text, const TargetColumn& target, std::string name)
{
    std::vector<std::pair<std::size_t, std::string_view>> lines; // (1-based line number, content)
    std::string_view rest(text);
    std::size_t line_no = 0;
    while (!rest.empty()) {
        ++line_no;
        const std::size_t nl = rest.find('\n');
        std::string_view line = rest.substr(0, nl);
        rest = nl == std::string_view::npos ? std::string_view{} : rest.substr(nl + 1);
        if (!trim(line).empty()) {
            lines.emplace_back(line_no, line);
        }
    }
    if (lines.empty()) {
        throw DataError("CSV input is empty");
    }

    std::vector<std::string> header;
    {
        const auto first = split_fields(lines.front().second);
        double scratch = 0.0;
        const bool numeric = std::all_of(first.begin(), first.end(),
                                         [&](std::string_view f) { return parse_number(f, scratch); });
        if (!numeric) {
            for (auto f : first) {
                header.emplace_back(f);
            }
        }
    }
    const std::size_t columns = header.empty() ? split_fields(lines.front().second).size() : header.size();
    if (columns < 2) {
        throw DataError("CSV needs a target column and at least one feature column");
    }

    std::size_t target_col = 0;
    if (const auto* by_name = std::get_if<std::string>(&target)) {
        const auto it = std::find(header.begin(), header.end(), *by_name);
        if (it == header.end()) {
            throw DataError("target column '" + *by_name + "' not found in CSV header");
        }
        target_col = static_cast<std::size_t>(it - header.begin());
    } else {
        target_col = std::get<std::size_t>(target);
        if (target_col >= columns) {
            throw DataError("target column index " + std::to_string(target_col) + " out of range for " +
                            std::to_string(columns) + " columns");
        }
    }

    std::vector<std::vector<double>> rows;
    std::vector<double> targets;
    for (std::size_t li = header.empty() ? 0 : 1; li < lines.size(); ++li) {
        const auto [number, line] = lines[li];
        const auto fields = split_fields(line);
        if (fields.size() != columns) {
            throw DataError("ragged CSV: line " + std::to_string(number) + " has " + std::to_string(fields.size()) +
                            " fields, expected " + std::to_string(columns));
        }
        std::vector<double> row;
        row.reserve(columns - 1);
        for (std::size_t c = 0; c < columns; ++c) {
            double value = 0.0;
            if (fields[c].empty()) {
                throw DataError("blank cell at line " + std::to_string(number) + ", column " + std::to_string(c + 1));
            }
            if (!parse_number(fields[c], value) || !std::isfinite(value)) {
                throw DataError("non-numeric cell '" + std::string(fields[c]) + "' at line " +
                                std::to_string(number) + ", column " + std::to_string(c + 1));
            }
            if (c == target_col) {
                targets.push_back(value);
            } else {
                row.push_back(value);
            }
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) {
        throw DataError("CSV has a header but no data rows");
    }

    Dataset data;
    data.name = std::move(name);
    data.features = FeatureMatrix::from_rows(rows);
    data.targets = std::move(targets);
    for (std::size_t c = 0; c < columns; ++c) {
        if (c != target_col) {
            data.feature_names.push_back(header.empty() ? "x" + std::to_string(data.feature_names.size()) : header[c]);
        }
    }
    return data;
}

Dataset load_csv(const std::filesystem::path& path, const TargetColumn& target)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("cannot open '" + path.string() + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_csv(buffer.str(), target, path.stem().string());
}

std::string format_csv(const Dataset& data, const std::string& target_name)
{
    std::string out;
    for (std::size_t c = 0; c < data.feature_count(); ++c) {
        out += c < data.feature_names.size() ? data.feature_names[c] : "x" + std::to_string(c);
        out += ',';
    }
    out += target_name;
    out += '\n';
    for (std::size_t r = 0; r < data.size(); ++r) {
        for (std::size_t c = 0; c < data.feature_count(); ++c) {
            out += format_double(data.features(r, c));
            out += ',';
        }
        out += format_double(data.targets[r]);
        out += '\n';
    }
    return out;
}

void write_csv(const Dataset& data, const std::filesystem::path& path, const std::string& target_name)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw DataError("cannot write '" + path.string() + "'");
    }
    out << format_csv(data, target_name);
}

std::size_t round_count(std::size_t n, double fraction)
{
    return static_cast<std::size_t>(std::floor(static_cast<double>(n) * fraction + 0.5));
}

Partition split(std::size_t n, const SplitSpec& spec, Rng& rng)
{
    if (!(spec.test_fraction > 0.0 && spec.test_fraction <= 0.5) ||
        !(spec.val_fraction_of_train > 0.0 && spec.val_fraction_of_train <= 0.5)) {
        throw ConfigError("split fractions must lie in (0, 0.5]");
    }
    const std::size_t n_test = round_count(n, spec.test_fraction);
    const std::size_t n_val = round_count(n - std::min(n, n_test), spec.val_fraction_of_train);
    if (n_test == 0 || n_val == 0 || n_test + n_val >= n) {
        throw ConfigError("split of " + std::to_string(n) + " rows leaves an empty partition");
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);

    Partition p;
    p.test.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_test));
    p.validation.assign(order.begin() + static_cast<std::ptrdiff_t>(n_test),
                        order.begin() + static_cast<std::ptrdiff_t>(n_test + n_val));
    p.train.assign(order.begin() + static_cast<std::ptrdiff_t>(n_test + n_val), order.end());
    return p;
}

double uball5d(std::span<const double> x)
{
    double sum = 0.0;
    for (double xi : x) {
        sum += (xi - 3.0) * (xi - 3.0);
    }
    return 10.0 / (5.0 + sum);
}

Dataset gen_uball5d(std::size_t n, Rng& rng)
{
    constexpr std::size_t d = 5;
    Dataset data;
    data.name = "uball5d";
    data.features = FeatureMatrix(n, d);
    data.targets.resize(n);
    for (std::size_t c = 0; c < d; ++c) {
        data.feature_names.push_back("x" + std::to_string(c));
    }
    std::vector<double> x(d);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < d; ++c) {
            x[c] = uniform_real(rng, 0.05, 6.05);
            data.features(r, c) = x[c];
        }
        data.targets[r] = uball5d(x);
    }
    return data;
}

} // namespace sgpdt
