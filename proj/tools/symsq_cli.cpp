#include <exception>
#include <iostream>

#include "symsq/cli_report.hpp"

int main(int argc, char** argv)
{
    try {
        return symsq::run_cli(argc, argv, std::cout, std::cerr);
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
}
