#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace hybridcorr {

// Config or argument problems the caller can fix; maps to exit code 2.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Flat key=value store. File syntax: one `key = value` per line, `#`
// comments, blank lines ignored. Later assignments (including --set
// overrides) win.
class SweepConfig {
public:
    // Empty path gives an empty config.
    static SweepConfig from_file(const std::string& path);

    void apply_override(const std::string& key_eq_value);

    bool has(const std::string& key) const;
    std::string get_string(const std::string& key,
                           const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    int get_int(const std::string& key, int fallback) const;
    // Comma-separated list of doubles. An explicitly empty value is a
    // usage error; an absent key yields the fallback.
    std::vector<double> get_grid(const std::string& key,
                                 std::vector<double> fallback) const;

    // Every stored key must appear in `allowed`; typos fail loudly instead
    // of silently running defaults.
    void restrict_keys(const std::vector<std::string>& allowed) const;

private:
    std::map<std::string, std::string> values_;
};

// Cartesian product over named axes. Leftmost axis varies slowest, so row
// order is independent of evaluation order.
class Grid {
public:
    void add(std::string name, std::vector<double> values);
    std::size_t axes() const { return names_.size(); }
    std::size_t size() const;
    const std::string& name(std::size_t axis) const { return names_[axis]; }
    double value(std::size_t row, std::size_t axis) const;

private:
    std::vector<std::string> names_;
    std::vector<std::vector<double>> values_;
};

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

enum class OutputFormat { csv, json };
OutputFormat parse_format(const std::string& name);

// CSV: header row, %.17g values, LF endings. JSON: array of row objects
// in column order.
void write_table(const Table& table, std::ostream& os, OutputFormat format);

// rows[i] = fn(i) on up to `jobs` workers. Row order is by index, never by
// completion; the lowest-index exception is rethrown after all workers join.
void run_indexed(std::size_t n, int jobs,
                 const std::function<std::vector<double>(std::size_t)>& fn,
                 std::vector<std::vector<double>>& rows);

} // namespace hybridcorr
