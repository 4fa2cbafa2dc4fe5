// One PASS/FAIL line per acceptance criterion. Optional args: seed, then a
// comma-separated list of criteria.

#include "matchfree/acceptance.hpp"

#include <iostream>
#include <sstream>
#include <string>

int main(int argc, char** argv) {
    matchfree::AcceptanceOptions o;
    if (argc > 1) o.seed = std::stoull(argv[1]);
    if (argc > 2) {
        std::stringstream ss(argv[2]);
        std::string item;
        while (std::getline(ss, item, ',')) o.only.push_back(std::stoi(item));
    }
    std::cout << "seed " << o.seed << std::endl;
    o.on_result = [](const matchfree::CriterionResult& r) { std::cout << matchfree::format_result(r) << std::endl; };
    int failed = 0;
    for (const auto& r : matchfree::run_acceptance(o))
        if (!r.passed) ++failed;
    std::cout << (failed ? "FAILED " + std::to_string(failed) + " criteria" : std::string("all criteria passed")) << std::endl;
    return failed ? 1 : 0;
}
