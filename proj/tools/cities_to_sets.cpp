// Converts a "name,latitude,longitude,area" city table into a sets CSV of
// balls of radius 0.1*sqrt(area/pi), readable by `dclocate setclust`.
//
// usage: dclocate-cities CITIES.csv [OUT.csv]

#include <fstream>
#include <iostream>

#include "dclocate/io.hpp"

int main(int argc, char** argv) {
    if (argc < 2 || argc > 3) {
        std::cerr << "usage: " << argv[0] << " CITIES.csv [OUT.csv]\n";
        return 2;
    }
    try {
        std::ifstream in(argv[1]);
        if (!in) throw dclocate::ValidationError(std::string("cannot open '") + argv[1] + "'");
        const auto sets = dclocate::cities_to_balls(dclocate::read_cities_csv(in));
        if (argc == 3) {
            std::ofstream out(argv[2]);
            if (!out) throw dclocate::ValidationError(std::string("cannot write '") + argv[2] + "'");
            dclocate::write_sets_csv(out, sets);
        } else {
            dclocate::write_sets_csv(std::cout, sets);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
