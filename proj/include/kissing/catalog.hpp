#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "kissing/data.hpp"
#include "kissing/errors.hpp"
#include "kissing/lattice.hpp"

namespace kissing {

struct CatalogEntry {
    GramLattice lattice;
    Rational expected_min_norm2;
    std::string description;
};

inline CatalogEntry load_lattice_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw data_error("cannot open lattice file: " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw data_error("bad JSON in " + path.string() + ": " + e.what());
    }
    try {
        const int dim = j.at("dim").get<int>();
        const auto& rows = j.at("gram");
        if (static_cast<int>(rows.size()) != dim) throw data_error("gram row count != dim in " + path.string());
        RationalMatrix g(dim, dim);
        for (int i = 0; i < dim; ++i) {
            const auto& row = rows.at(static_cast<size_t>(i));
            if (static_cast<int>(row.size()) != dim) throw data_error("gram is not square in " + path.string());
            for (int k = 0; k < dim; ++k) g(i, k) = Rational::from_string(row.at(static_cast<size_t>(k)).get<std::string>());
        }
        CatalogEntry entry{GramLattice(std::move(g), j.at("name").get<std::string>(), "catalog normalization"),
                           Rational::from_string(j.at("expected_min_norm2").get<std::string>()),
                           j.value("description", std::string{})};
        return entry;
    } catch (const nlohmann::json::exception& e) {
        throw data_error("bad lattice schema in " + path.string() + ": " + e.what());
    }
}

/// Looks a lattice up by catalog name, or loads it from an explicit path when
/// the argument names an existing .json file.
inline CatalogEntry catalog(const std::string& name_or_path) {
    namespace fs = std::filesystem;
    if (fs::exists(name_or_path) && fs::is_regular_file(name_or_path)) return load_lattice_file(name_or_path);
    const fs::path p = data_dir() / "lattices" / (name_or_path + ".json");
    if (!fs::exists(p)) throw data_error("unknown lattice '" + name_or_path + "' (no file " + p.string() + ")");
    return load_lattice_file(p);
}

inline std::vector<std::string> catalog_names() {
    namespace fs = std::filesystem;
    std::vector<std::string> names;
    const fs::path dir = data_dir() / "lattices";
    if (!fs::exists(dir)) throw data_error("lattice catalog directory missing: " + dir.string());
    for (const auto& e : fs::directory_iterator(dir))
        if (e.path().extension() == ".json") names.push_back(e.path().stem().string());
    std::sort(names.begin(), names.end());
    return names;
}

} // namespace kissing
