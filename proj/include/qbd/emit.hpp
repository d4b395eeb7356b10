#ifndef QBD_EMIT_HPP
#define QBD_EMIT_HPP

#include <string>
#include <vector>

#include <json.hpp>

namespace qbd {

// Column-oriented table produced by the CLI commands. Cells are JSON scalars;
// exact values travel as "p/q" strings so no precision is lost, floats as
// numbers. CSV and JSON renderings of one table carry identical values.
struct EmittedTable {
    std::string note;                              // classification line, may be empty
    std::vector<std::string> columns;              // header names
    std::vector<std::vector<nlohmann::json>> rows;
};

std::string to_csv(const EmittedTable& table);
nlohmann::json to_json(const EmittedTable& table);

}  // namespace qbd

#endif  // QBD_EMIT_HPP
