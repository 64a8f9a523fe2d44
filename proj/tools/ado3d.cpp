#include "ado3d/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
  ado3d::RunConfig config;
  if (const int code = ado3d::parse_command_line(argc, argv, config); code >= 0) return code;
  return ado3d::run(config, std::cerr);
}
