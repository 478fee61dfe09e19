#include <iostream>

#include "netsense/cli.hpp"

int main(int argc, char** argv)
{
	return netsense::cli::parse_and_dispatch(argc, argv, std::cout, std::cerr);
}
