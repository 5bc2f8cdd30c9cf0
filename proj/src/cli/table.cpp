#include "qcqkd/cli.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include <ostream>

namespace qcqkd::cli {

namespace {

std::string format_cell(const Cell& cell) {
  struct Visitor {
    std::string operator()(double v) const { return fmt::format("{:.9g}", v); }
    std::string operator()(long long v) const { return fmt::format("{}", v); }
    std::string operator()(const std::string& v) const { return v; }
  };
  return std::visit(Visitor{}, cell);
}

}  // namespace

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size()) {
    throw std::logic_error(fmt::format("row has {} cells, table has {} columns",
                                       row.size(), columns.size()));
  }
  rows.push_back(std::move(row));
}

void write_csv(const Table& table, std::ostream& out) {
  out << fmt::format("{}\n", fmt::join(table.columns, ","));
  for (const auto& row : table.rows) {
    std::vector<std::string> cells;
    cells.reserve(row.size());
    for (const auto& cell : row) cells.push_back(format_cell(cell));
    out << fmt::format("{}\n", fmt::join(cells, ","));
  }
}

void write_json(const Table& table, std::ostream& out) {
  nlohmann::ordered_json doc;
  doc["metadata"] = nlohmann::ordered_json(table.metadata);
  doc["columns"] = table.columns;
  auto& data = doc["data"];
  data = nlohmann::ordered_json::object();
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    auto column = nlohmann::ordered_json::array();
    for (const auto& row : table.rows) {
      std::visit([&](const auto& v) { column.push_back(v); }, row[c]);
    }
    data[table.columns[c]] = std::move(column);
  }
  out << doc.dump(2) << '\n';
}

}  // namespace qcqkd::cli
