#include "options.hpp"

#include <invcure/error.hpp>

#include <charconv>
#include <cmath>
#include <sstream>

namespace invcure::cli {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& token, const std::string& flag) {
    const auto t = trim(token);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v))
        throw InvalidArgument(flag + ": '" + token + "' is not a finite number");
    return v;
}

} // namespace

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, sep)) parts.push_back(trim(item));
    if (!text.empty() && text.back() == sep) parts.emplace_back();
    return parts;
}

std::vector<double> parse_list(const std::string& text, const std::string& flag) {
    std::vector<double> out;
    for (const auto& part : split(text, ',')) out.push_back(parse_double(part, flag));
    if (out.empty()) throw InvalidArgument(flag + ": empty list");
    return out;
}

std::vector<std::size_t> parse_size_list(const std::string& text, const std::string& flag) {
    std::vector<std::size_t> out;
    for (double v : parse_list(text, flag)) {
        if (v < 1.0 || v != std::floor(v)) throw InvalidArgument(flag + ": expected positive integers");
        out.push_back(static_cast<std::size_t>(v));
    }
    return out;
}

std::vector<double> parse_grid(const std::string& text, const std::string& flag) {
    if (text.find(':') == std::string::npos) return parse_list(text, flag);
    const auto parts = split(text, ':');
    if (parts.size() != 3) throw InvalidArgument(flag + ": expected a:b:step");
    const double a = parse_double(parts[0], flag);
    const double b = parse_double(parts[1], flag);
    const double step = parse_double(parts[2], flag);
    if (!(step > 0.0) || b < a) throw InvalidArgument(flag + ": need step > 0 and a <= b");
    std::vector<double> out;
    // integer stepping avoids drift; the slack keeps b when (b - a) / step is whole
    const auto count = static_cast<std::size_t>(std::floor((b - a) / step + 1e-9));
    for (std::size_t i = 0; i <= count; ++i) out.push_back(a + static_cast<double>(i) * step);
    return out;
}

BandwidthRule parse_rule(const std::string& text) {
    const auto t = trim(text);
    if (t == "cv") return BandwidthRule::cross_validated();
    if (t.size() > 2 && t[1] == '=') {
        const double v = parse_double(t.substr(2), "--rules");
        if (!(v > 0.0)) throw InvalidArgument("--rules: bandwidth constants must be positive");
        if (t[0] == 'c') return BandwidthRule::rate_constant(v);
        if (t[0] == 'h') return BandwidthRule::fixed(v);
    }
    throw InvalidArgument("unknown bandwidth rule '" + text + "' (expected c=<num>, h=<num> or cv)");
}

BandwidthRule ModelFlags::rule() const {
    if (cv) return BandwidthRule::cross_validated();
    if (bandwidth) {
        if (!(*bandwidth > 0.0)) throw InvalidArgument("--bandwidth must be positive");
        return BandwidthRule::fixed(*bandwidth);
    }
    const double c = bandwidth_c.value_or(3.0);
    if (!(c > 0.0)) throw InvalidArgument("--bandwidth-c must be positive");
    return BandwidthRule::rate_constant(c);
}

ParamBox ModelFlags::param_box() const {
    const auto v = parse_list(box, "--box");
    if (v.size() != 2 || !(v[0] < v[1])) throw InvalidArgument("--box: expected lo,hi with lo < hi");
    return ParamBox::uniform(v[0], v[1]);
}

} // namespace invcure::cli
