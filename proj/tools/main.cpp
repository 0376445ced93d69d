// Copyright (c) 2026 invopt contributors
// Licensed under the Apache License, Version 2.0.

#include "invopt/cli.hpp"

int main(int argc, char** argv) { return invopt::runCli(argc, argv); }
