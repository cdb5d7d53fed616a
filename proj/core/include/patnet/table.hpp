#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

namespace patnet {

/// Column-store analysis table. Numeric columns are doubles; categorical
/// columns are string levels (used for fixed effects).
class DataTable {
public:
    void add_numeric(std::string name, std::vector<double> values);
    void add_categorical(std::string name, std::vector<std::string> values);

    std::size_t n_rows() const { return n_rows_; }
    std::size_t n_cols() const { return order_.size(); }

    bool has_column(const std::string& name) const;
    bool is_numeric(const std::string& name) const;
    std::span<const double> numeric(const std::string& name) const;
    std::span<const std::string> categorical(const std::string& name) const;
    const std::vector<std::string>& column_names() const { return order_; }

    /// Sorted distinct levels of a categorical column.
    std::vector<std::string> levels(const std::string& name) const;

    /// Row subset in the given order (used to drop rows with nulls upstream).
    DataTable select_rows(std::span<const std::size_t> rows) const;

private:
    using Column = std::variant<std::vector<double>, std::vector<std::string>>;
    void check_size(std::size_t n, const std::string& name);

    std::unordered_map<std::string, Column> columns_;
    std::vector<std::string> order_;
    std::size_t n_rows_ = 0;
    bool empty_ = true;
};

}  // namespace patnet
