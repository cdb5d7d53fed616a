#include "patnet/table.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace patnet {

void DataTable::check_size(std::size_t n, const std::string& name) {
    if (empty_) {
        n_rows_ = n;
        empty_ = false;
    } else if (n != n_rows_) {
        throw std::invalid_argument("DataTable: column " + name + " has " + std::to_string(n) +
                                    " rows, table has " + std::to_string(n_rows_));
    }
    if (columns_.contains(name))
        throw std::invalid_argument("DataTable: duplicate column " + name);
}

void DataTable::add_numeric(std::string name, std::vector<double> values) {
    check_size(values.size(), name);
    order_.push_back(name);
    columns_.emplace(std::move(name), std::move(values));
}

void DataTable::add_categorical(std::string name, std::vector<std::string> values) {
    check_size(values.size(), name);
    order_.push_back(name);
    columns_.emplace(std::move(name), std::move(values));
}

bool DataTable::has_column(const std::string& name) const { return columns_.contains(name); }

bool DataTable::is_numeric(const std::string& name) const {
    auto it = columns_.find(name);
    if (it == columns_.end()) throw std::invalid_argument("DataTable: no column " + name);
    return std::holds_alternative<std::vector<double>>(it->second);
}

std::span<const double> DataTable::numeric(const std::string& name) const {
    auto it = columns_.find(name);
    if (it == columns_.end()) throw std::invalid_argument("DataTable: no column " + name);
    const auto* v = std::get_if<std::vector<double>>(&it->second);
    if (!v) throw std::invalid_argument("DataTable: column " + name + " is not numeric");
    return *v;
}

std::span<const std::string> DataTable::categorical(const std::string& name) const {
    auto it = columns_.find(name);
    if (it == columns_.end()) throw std::invalid_argument("DataTable: no column " + name);
    const auto* v = std::get_if<std::vector<std::string>>(&it->second);
    if (!v) throw std::invalid_argument("DataTable: column " + name + " is not categorical");
    return *v;
}

std::vector<std::string> DataTable::levels(const std::string& name) const {
    auto values = categorical(name);
    std::set<std::string> distinct(values.begin(), values.end());
    return {distinct.begin(), distinct.end()};
}

DataTable DataTable::select_rows(std::span<const std::size_t> rows) const {
    DataTable out;
    for (const auto& name : order_) {
        const Column& col = columns_.at(name);
        if (const auto* num = std::get_if<std::vector<double>>(&col)) {
            std::vector<double> v;
            v.reserve(rows.size());
            for (std::size_t r : rows) v.push_back((*num)[r]);
            out.add_numeric(name, std::move(v));
        } else {
            const auto& cat = std::get<std::vector<std::string>>(col);
            std::vector<std::string> v;
            v.reserve(rows.size());
            for (std::size_t r : rows) v.push_back(cat[r]);
            out.add_categorical(name, std::move(v));
        }
    }
    return out;
}

}  // namespace patnet
