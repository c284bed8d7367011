#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace invcure {

/// One right-censored observation: Y = min(T, C), status = 1{T <= C}, covariate X.
struct Observation {
    double time = 0.0;
    int status = 0;
    double x = 0.0;

    friend bool operator==(const Observation&, const Observation&) = default;
};

/// Immutable, validated sample of observations. Row order is preserved.
class SurvivalDataset {
public:
    /// Throws InvalidArgument if empty, if a time is negative or non-finite,
    /// if a status is not 0/1, or if a covariate is non-finite.
    explicit SurvivalDataset(std::vector<Observation> records);

    std::size_t size() const noexcept { return records_.size(); }
    const Observation& operator[](std::size_t i) const noexcept { return records_[i]; }
    std::span<const Observation> records() const noexcept { return records_; }

    auto begin() const noexcept { return records_.begin(); }
    auto end() const noexcept { return records_.end(); }

    std::size_t event_count() const noexcept;
    bool has_events() const noexcept { return event_count() > 0; }
    bool has_censoring() const noexcept { return event_count() < size(); }

private:
    std::vector<Observation> records_;
};

/// Every row repeated `copies` times (row i's copies are adjacent).
SurvivalDataset repeat_rows(const SurvivalDataset& data, std::size_t copies);

/// Parses the `time,status,x` schema. Columns may appear in any order; extra
/// columns are ignored. Errors name the source, row and column.
SurvivalDataset parse_csv(std::istream& in, std::string_view source = "<stream>");
SurvivalDataset load_csv(const std::filesystem::path& path);

void write_csv(const SurvivalDataset& data, std::ostream& out);
void write_csv(const SurvivalDataset& data, const std::filesystem::path& path);

/// Shortest "%.12g" rendering used for every numeric CSV cell.
std::string format_number(double value);

} // namespace invcure
