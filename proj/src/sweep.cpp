#include "hybridcorr/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <nlohmann/json.hpp>
#include <thread>

namespace hybridcorr {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& token, const std::string& key) {
    const std::string t = trim(token);
    if (!t.empty()) {
        char* end = nullptr;
        const double v = std::strtod(t.c_str(), &end);
        if (end == t.c_str() + t.size()) return v;
    }
    throw UsageError("config key '" + key + "': expected a number, got '" +
                     token + "'");
}

std::pair<std::string, std::string> split_assignment(const std::string& text) {
    const auto eq = text.find('=');
    if (eq == std::string::npos)
        throw UsageError("expected key=value, got '" + text + "'");
    const std::string key = trim(text.substr(0, eq));
    if (key.empty()) throw UsageError("empty key in '" + text + "'");
    return {key, trim(text.substr(eq + 1))};
}

} // namespace

SweepConfig SweepConfig::from_file(const std::string& path) {
    SweepConfig cfg;
    if (path.empty()) return cfg;
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open config file: " + path);
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        auto [key, value] = split_assignment(line);
        cfg.values_[key] = value;
    }
    return cfg;
}

void SweepConfig::apply_override(const std::string& key_eq_value) {
    auto [key, value] = split_assignment(key_eq_value);
    values_[key] = value;
}

bool SweepConfig::has(const std::string& key) const {
    return values_.count(key) != 0;
}

std::string SweepConfig::get_string(const std::string& key,
                                    const std::string& fallback) const {
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

double SweepConfig::get_double(const std::string& key, double fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    if (it->second.find(',') != std::string::npos)
        throw UsageError("config key '" + key + "' expects a single value");
    return parse_double(it->second, key);
}

int SweepConfig::get_int(const std::string& key, int fallback) const {
    const double v = get_double(key, static_cast<double>(fallback));
    const int i = static_cast<int>(v);
    if (static_cast<double>(i) != v)
        throw UsageError("config key '" + key + "' expects an integer");
    return i;
}

std::vector<double> SweepConfig::get_grid(const std::string& key,
                                          std::vector<double> fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    std::vector<double> out;
    std::size_t start = 0;
    const std::string& text = it->second;
    while (start <= text.size()) {
        const auto comma = text.find(',', start);
        const std::string token =
            text.substr(start, comma == std::string::npos ? std::string::npos
                                                          : comma - start);
        if (!trim(token).empty()) out.push_back(parse_double(token, key));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    if (out.empty())
        throw UsageError("config key '" + key + "': empty grid");
    return out;
}

void SweepConfig::restrict_keys(
    const std::vector<std::string>& allowed) const {
    for (const auto& [key, value] : values_) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            std::string msg = "unknown config key '" + key + "' (allowed:";
            for (const auto& a : allowed) msg += " " + a;
            throw UsageError(msg + ")");
        }
    }
}

void Grid::add(std::string name, std::vector<double> values) {
    if (values.empty())
        throw UsageError("config key '" + name + "': empty grid");
    names_.push_back(std::move(name));
    values_.push_back(std::move(values));
}

std::size_t Grid::size() const {
    std::size_t n = 1;
    for (const auto& v : values_) n *= v.size();
    return n;
}

double Grid::value(std::size_t row, std::size_t axis) const {
    std::size_t stride = 1;
    for (std::size_t a = axes(); a-- > axis + 1;) stride *= values_[a].size();
    return values_[axis][(row / stride) % values_[axis].size()];
}

OutputFormat parse_format(const std::string& name) {
    if (name == "csv") return OutputFormat::csv;
    if (name == "json") return OutputFormat::json;
    throw UsageError("unknown format '" + name + "' (csv or json)");
}

void write_table(const Table& table, std::ostream& os, OutputFormat format) {
    if (format == OutputFormat::csv) {
        for (std::size_t c = 0; c < table.columns.size(); ++c)
            os << (c ? "," : "") << table.columns[c];
        os << "\n";
        char buf[40];
        for (const auto& row : table.rows) {
            for (std::size_t c = 0; c < row.size(); ++c) {
                std::snprintf(buf, sizeof buf, "%.17g", row[c]);
                os << (c ? "," : "") << buf;
            }
            os << "\n";
        }
        return;
    }
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& row : table.rows) {
        nlohmann::ordered_json obj = nlohmann::ordered_json::object();
        for (std::size_t c = 0; c < row.size(); ++c)
            obj[table.columns[c]] = row[c];
        rows.push_back(std::move(obj));
    }
    os << rows.dump(2) << "\n";
}

void run_indexed(std::size_t n, int jobs,
                 const std::function<std::vector<double>(std::size_t)>& fn,
                 std::vector<std::vector<double>>& rows) {
    rows.assign(n, {});
    if (n == 0) return;
    const int workers =
        std::max(1, std::min(jobs, static_cast<int>(std::min<std::size_t>(
                                       n, std::thread::hardware_concurrency()
                                              ? std::thread::hardware_concurrency()
                                              : 1))));
    if (workers == 1) {
        for (std::size_t i = 0; i < n; ++i) rows[i] = fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(n);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= n) return;
                try {
                    rows[i] = fn(i);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        });
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

} // namespace hybridcorr
