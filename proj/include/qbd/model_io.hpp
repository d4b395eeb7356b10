#ifndef QBD_MODEL_IO_HPP
#define QBD_MODEL_IO_HPP

#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "qbd/model.hpp"

namespace qbd {

// Model file schema:
//   {"kind": "discrete"|"continuous", "N": int,
//    "blocks": [{"B": [[..]], "A": [[..]], "C": [[..]]}, ...]}
// Entries are numbers or "p/q" strings. Level 0 omits "C"; the last element
// may omit "A". The exact backend accepts integer numbers and "p/q" strings
// but rejects non-integer numbers (already rounded to binary64 by JSON).

namespace detail {

template <ScalarField T>
T entry_from_json(const nlohmann::json& j) {
    if (j.is_string()) return ScalarTraits<T>::from_rational(Rational::from_string(j.get<std::string>()));
    if (j.is_number_integer()) return ScalarTraits<T>::from_int(j.get<long>());
    if (j.is_number_float()) {
        if constexpr (ScalarTraits<T>::is_exact)
            throw std::invalid_argument(
                "model file: non-integer numeric entry " + j.dump() +
                " is not exactly representable; use a \"p/q\" string with the exact backend");
        else
            return j.get<double>();
    }
    throw std::invalid_argument("model file: entry " + j.dump() + " is not a number or string");
}

template <ScalarField T>
Matrix<T> matrix_from_json(const nlohmann::json& j, std::size_t n_phases) {
    if (!j.is_array() || j.size() != n_phases)
        throw std::invalid_argument("model file: block is not an " + std::to_string(n_phases) +
                                    "-row matrix");
    Matrix<T> m(n_phases, n_phases);
    for (std::size_t i = 0; i < n_phases; ++i) {
        const auto& row = j[i];
        if (!row.is_array() || row.size() != n_phases)
            throw std::invalid_argument("model file: matrix row " + std::to_string(i) +
                                        " has wrong length");
        for (std::size_t k = 0; k < n_phases; ++k) m(i, k) = entry_from_json<T>(row[k]);
    }
    return m;
}

template <ScalarField T>
nlohmann::json matrix_to_json(const Matrix<T>& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if constexpr (ScalarTraits<T>::is_exact)
                row.push_back(m(i, j).str());
            else
                row.push_back(m(i, j));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace detail

template <ScalarField T>
BlockTridiagonal<T> model_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw std::invalid_argument("model file: top level must be an object");
    const std::string kind_str = j.value("kind", std::string("discrete"));
    Kind kind;
    if (kind_str == "discrete")
        kind = Kind::Discrete;
    else if (kind_str == "continuous")
        kind = Kind::Continuous;
    else
        throw std::invalid_argument("model file: unknown kind \"" + kind_str + "\"");
    if (!j.contains("N") || !j["N"].is_number_integer() || j["N"].get<long>() < 1)
        throw std::invalid_argument("model file: \"N\" must be a positive integer");
    const std::size_t n_phases = j["N"].get<std::size_t>();
    if (!j.contains("blocks") || !j["blocks"].is_array() || j["blocks"].empty())
        throw std::invalid_argument("model file: \"blocks\" must be a nonempty array");

    std::vector<LevelBlocks<T>> blocks;
    for (std::size_t lvl = 0; lvl < j["blocks"].size(); ++lvl) {
        const auto& jb = j["blocks"][lvl];
        if (!jb.is_object() || !jb.contains("B"))
            throw std::invalid_argument("model file: level " + std::to_string(lvl) +
                                        " must be an object with a \"B\" block");
        LevelBlocks<T> lb;
        lb.B = detail::matrix_from_json<T>(jb["B"], n_phases);
        if (jb.contains("A")) lb.A = detail::matrix_from_json<T>(jb["A"], n_phases);
        if (jb.contains("C")) lb.C = detail::matrix_from_json<T>(jb["C"], n_phases);
        blocks.push_back(std::move(lb));
    }
    return build_model<T>(n_phases, kind, std::move(blocks));
}

template <ScalarField T>
nlohmann::json model_to_json(const BlockTridiagonal<T>& m) {
    nlohmann::json j;
    j["kind"] = kind_name(m.kind());
    j["N"] = m.phases();
    nlohmann::json blocks = nlohmann::json::array();
    for (std::size_t lvl = 0; lvl < m.stored_levels(); ++lvl) {
        nlohmann::json jb;
        jb["B"] = detail::matrix_to_json(m.B(lvl));
        if (m.has_A(lvl)) jb["A"] = detail::matrix_to_json(m.A(lvl));
        if (lvl > 0) jb["C"] = detail::matrix_to_json(m.C(lvl));
        blocks.push_back(std::move(jb));
    }
    j["blocks"] = std::move(blocks);
    return j;
}

template <ScalarField T>
BlockTridiagonal<T> load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open model file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument("model file " + path + ": " + e.what());
    }
    return model_from_json<T>(j);
}

}  // namespace qbd

#endif  // QBD_MODEL_IO_HPP
