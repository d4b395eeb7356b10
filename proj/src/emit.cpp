#include "qbd/emit.hpp"

#include <sstream>
#include <stdexcept>

namespace qbd {

namespace {

std::string csv_cell(const nlohmann::json& cell) {
    // strings are emitted raw ("p/q" never needs quoting); numbers use the
    // same shortest round-trip text as the JSON rendering
    if (cell.is_string()) return cell.get<std::string>();
    return cell.dump();
}

}  // namespace

std::string to_csv(const EmittedTable& table) {
    std::ostringstream out;
    if (!table.note.empty()) out << "# " << table.note << "\n";
    for (std::size_t c = 0; c < table.columns.size(); ++c)
        out << (c ? "," : "") << table.columns[c];
    out << "\n";
    for (const auto& row : table.rows) {
        if (row.size() != table.columns.size())
            throw std::logic_error("EmittedTable: row width differs from header");
        for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << csv_cell(row[c]);
        out << "\n";
    }
    return out.str();
}

nlohmann::json to_json(const EmittedTable& table) {
    nlohmann::json j;
    if (!table.note.empty()) j["note"] = table.note;
    j["columns"] = table.columns;
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : table.rows) {
        if (row.size() != table.columns.size())
            throw std::logic_error("EmittedTable: row width differs from header");
        nlohmann::json obj;
        for (std::size_t c = 0; c < row.size(); ++c) obj[table.columns[c]] = row[c];
        rows.push_back(std::move(obj));
    }
    j["rows"] = std::move(rows);
    return j;
}

}  // namespace qbd
