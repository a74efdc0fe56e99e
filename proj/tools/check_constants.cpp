// Verifies data/rank_constants.json against the compiled-in table, so a
// drifting data file fails the build. --emit regenerates the file content.
#include <fstream>
#include <iostream>

#include <json.hpp>

#include "latmass/conductor.hpp"

using nlohmann::json;

static json canonical() {
    json rows = json::array();
    for (const auto& row : latmass::rank_constants_table()) {
        rows.push_back({{"rank", row.rank},
                        {"inv_mass_max", row.inv_mass_max.get_str()},
                        {"det_max", row.det_max.get_str()}});
    }
    return {{"version", 1},
            {"checksum", latmass::rank_constants_checksum()},
            {"rows", rows}};
}

int main(int argc, char** argv) {
    if (argc == 2 && std::string(argv[1]) == "--emit") {
        std::cout << canonical().dump(2) << "\n";
        return 0;
    }
    if (argc != 2) {
        std::cerr << "usage: check-rank-constants <rank_constants.json> | --emit\n";
        return 2;
    }
    std::ifstream in(argv[1]);
    if (!in) {
        std::cerr << "cannot open " << argv[1] << "\n";
        return 1;
    }
    json file = json::parse(in, nullptr, false);
    if (file.is_discarded() || file != canonical()) {
        std::cerr << "rank constants data file disagrees with compiled table: " << argv[1] << "\n";
        return 1;
    }
    return 0;
}
