// Copyright 2026 The qrep Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end: evaluates one of generate / decompose / swap /
// chain / sweep over a parameter grid and writes CSV.

#include <fstream>
#include <iostream>

#include "qrep/cli/config.hpp"
#include "qrep/cli/sweep.hpp"

int main(int argc, char **argv) {
    using namespace qrep::cli;
    RunConfig cfg;
    try {
        cfg = parse_config(argc, argv);
    } catch (const HelpRequested &h) {
        std::cout << h.text;
        return 0;
    } catch (const ConfigError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        const auto rows = run_sweep(cfg);
        const auto summary = summary_lines(cfg, rows);
        if (cfg.out.empty()) {
            write_csv(std::cout, rows);
            for (const auto &line : summary) {
                std::cerr << line << "\n";
            }
        } else {
            std::ofstream f(cfg.out, std::ios::binary);
            if (!f) {
                std::cerr << "error: cannot open " << cfg.out << "\n";
                return 1;
            }
            write_csv(f, rows);
            f.close();
            if (!f) {
                std::cerr << "error: failed writing " << cfg.out << "\n";
                return 1;
            }
            for (const auto &line : summary) {
                std::cout << line << "\n";
            }
        }
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
