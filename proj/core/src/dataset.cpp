#include "invcure/dataset.hpp"

#include "invcure/error.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>

namespace invcure {

EmptyNeighborhood::EmptyNeighborhood(double x, std::optional<std::size_t> subject)
    : Error([&] {
          std::ostringstream msg;
          msg << "empty kernel neighborhood at x = " << x;
          if (subject) msg << " (subject " << *subject << ")";
          msg << "; bandwidth too small";
          return msg.str();
      }()),
      x_(x), subject_(subject) {}

SurvivalDataset::SurvivalDataset(std::vector<Observation> records) : records_(std::move(records)) {
    if (records_.empty()) throw InvalidArgument("dataset must contain at least one record");
    for (std::size_t i = 0; i < records_.size(); ++i) {
        const auto& r = records_[i];
        if (!std::isfinite(r.time) || r.time < 0.0)
            throw InvalidArgument("record " + std::to_string(i) + ": time must be finite and >= 0");
        if (r.status != 0 && r.status != 1)
            throw InvalidArgument("record " + std::to_string(i) + ": invalid status");
        if (!std::isfinite(r.x))
            throw InvalidArgument("record " + std::to_string(i) + ": covariate must be finite");
    }
}

std::size_t SurvivalDataset::event_count() const noexcept {
    return static_cast<std::size_t>(
        std::count_if(records_.begin(), records_.end(), [](const Observation& r) { return r.status == 1; }));
}

SurvivalDataset repeat_rows(const SurvivalDataset& data, std::size_t copies) {
    if (copies == 0) throw InvalidArgument("repeat_rows: copies must be >= 1");
    std::vector<Observation> out;
    out.reserve(data.size() * copies);
    for (const auto& r : data)
        for (std::size_t c = 0; c < copies; ++c) out.push_back(r);
    return SurvivalDataset(std::move(out));
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        auto comma = line.find(',', start);
        fields.push_back(trim(line.substr(start, comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return fields;
}

[[noreturn]] void fail(std::string_view source, std::size_t row, std::string_view column, std::string_view what) {
    std::ostringstream msg;
    msg << source << ": row " << row << ", column '" << column << "': " << what;
    throw ParseError(msg.str());
}

} // namespace

SurvivalDataset parse_csv(std::istream& in, std::string_view source) {
    static constexpr std::array<std::string_view, 3> kColumns{"time", "status", "x"};

    std::string line;
    if (!std::getline(in, line) || trim(line).empty()) {
        throw ParseError(std::string(source) + ": empty file (expected header time,status,x)");
    }
    const auto header = split_fields(line);
    std::array<std::size_t, 3> index{};
    for (std::size_t c = 0; c < kColumns.size(); ++c) {
        auto it = std::find(header.begin(), header.end(), kColumns[c]);
        if (it == header.end())
            throw ParseError(std::string(source) + ": missing column '" + std::string(kColumns[c]) + "'");
        index[c] = static_cast<std::size_t>(it - header.begin());
    }

    std::vector<Observation> records;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (trim(line).empty()) continue;
        const auto fields = split_fields(line);
        std::array<double, 3> value{};
        for (std::size_t c = 0; c < kColumns.size(); ++c) {
            if (index[c] >= fields.size()) fail(source, row, kColumns[c], "missing cell");
            const auto cell = fields[index[c]];
            const auto* first = cell.data();
            const auto* last = cell.data() + cell.size();
            auto [ptr, ec] = std::from_chars(first, last, value[c]);
            if (cell.empty() || ec != std::errc() || ptr != last)
                fail(source, row, kColumns[c], "non-numeric value '" + std::string(cell) + "'");
            if (!std::isfinite(value[c])) fail(source, row, kColumns[c], "non-finite value");
        }
        if (value[0] < 0.0) fail(source, row, "time", "negative time");
        if (value[1] != 0.0 && value[1] != 1.0) fail(source, row, "status", "invalid status (must be 0 or 1)");
        records.push_back({value[0], static_cast<int>(value[1]), value[2]});
    }
    if (records.empty()) throw ParseError(std::string(source) + ": no data rows");
    return SurvivalDataset(std::move(records));
}

SurvivalDataset load_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open input file '" + path.string() + "'");
    return parse_csv(in, path.string());
}

std::string format_number(double value) {
    std::array<char, 32> buf{};
    std::snprintf(buf.data(), buf.size(), "%.12g", value);
    return buf.data();
}

void write_csv(const SurvivalDataset& data, std::ostream& out) {
    out << "time,status,x\n";
    for (const auto& r : data) out << format_number(r.time) << ',' << r.status << ',' << format_number(r.x) << '\n';
}

void write_csv(const SurvivalDataset& data, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot open output file '" + path.string() + "'");
    write_csv(data, out);
}

} // namespace invcure
