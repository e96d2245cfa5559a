// SPDX-License-Identifier: Apache-2.0
//
// mcirsa - multi-cell IRSA uplink simulator with massive MIMO SIC decoding
// Copyright (C) 2026 the mcirsa authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef MCIRSA_OUTPUT_HPP
#define MCIRSA_OUTPUT_HPP

#include <fstream>
#include <string>
#include <vector>

#include "config.hpp"
#include "errors.hpp"
#include "simulate.hpp"

namespace mcirsa
{

/**
 * Write sweep rows as CSV: UTF-8, LF line endings, '.' decimal separator,
 * 17 significant digits so results survive a round trip bit-exactly.
 */
inline void write_csv(const std::vector<SweepRow> &rows, const std::string &path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw io_error("cannot open output file: " + path);
    out << "sweep,value,cell,mean_throughput,stderr,runs,config_digest\n";
    for (const SweepRow &r : rows)
        out << r.sweep << ',' << format_g17(r.value) << ',' << r.cell << ','
            << format_g17(r.mean) << ',' << format_g17(r.std_error) << ',' << r.runs << ','
            << r.digest << '\n';
    out.flush();
    if (!out)
        throw io_error("write failed: " + path);
}

/// gnuplot script plotting mean throughput (with error bars) vs sweep value.
inline void write_plot_script(const std::string &script_path, const std::string &csv_name,
                              const std::string &x_label)
{
    std::ofstream out(script_path, std::ios::binary);
    if (!out)
        throw io_error("cannot open output file: " + script_path);
    out << "set datafile separator ','\n"
        << "set xlabel '" << x_label << "'\n"
        << "set ylabel 'center-cell throughput'\n"
        << "set key left top\n"
        << "set grid\n"
        << "plot '" << csv_name << "' every ::1 using 2:4:5 with yerrorlines title 'mean +/- stderr'\n";
    out.flush();
    if (!out)
        throw io_error("write failed: " + script_path);
}

/// CSV plus the companion plot script next to it.
inline void emit_outputs(const std::vector<SweepRow> &rows, const std::string &csv_path)
{
    if (rows.empty())
        throw std::invalid_argument("emit_outputs: no rows to write");
    write_csv(rows, csv_path);
    std::string script = csv_path;
    if (script.size() > 4 && script.substr(script.size() - 4) == ".csv")
        script = script.substr(0, script.size() - 4);
    script += ".gp";
    const auto slash = csv_path.find_last_of('/');
    const std::string csv_name = slash == std::string::npos ? csv_path : csv_path.substr(slash + 1);
    write_plot_script(script, csv_name, rows.front().sweep);
}

} // namespace mcirsa

#endif
