// Copyright (c) linrank contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace linrank::cli {

enum ExitCode : int {
    Found = 0,
    NoneFound = 1,
    NonTerminating = 2,
    NoneModuloHull = 3,
    Usage = 64,
    DataError = 65,
    NoInput = 66,
    Internal = 70,
};

// Runs the command line; args excludes the program name. Returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace linrank::cli
