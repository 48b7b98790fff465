// Copyright 2026 The Kaya Authors
// SPDX-License-Identifier: Apache-2.0

#include <kaya/cli/cli.hpp>

#include <iostream>

int main(int argc, char** argv)
{
    return kaya::cli::run({argv + 1, argv + argc}, std::cout, std::cerr);
}
