// rislab: rate analysis and phase optimization for RIS-aided massive MIMO
// Copyright (C) 2026 The rislab authors
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

#include "rislab/error.hpp"
#include "rislab/experiment.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace rislab
{

namespace
{

void write_file(const std::filesystem::path &path, const std::string &content)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error(ErrorKind::io_error, "cannot open '" + path.string() + "' for writing");
    out << content;
    out.close();
    if (!out)
        throw Error(ErrorKind::io_error, "failed writing '" + path.string() + "'");
}

std::string plot_script(const SweepResult &result, const std::string &csv_name)
{
    const nlohmann::json hints = {{"csv", csv_name},
                                  {"x", result.x_column},
                                  {"group", result.group_column},
                                  {"curves", result.curve_columns},
                                  {"xlabel", result.x_label},
                                  {"ylabel", result.y_label},
                                  {"title", to_string(result.kind)}};
    std::ostringstream s;
    s << "#!/usr/bin/env python3\n"
         "# Generated by rislab " << version << ". Plots " << csv_name << " next to this script.\n"
         "import csv\n"
         "import json\n"
         "import math\n"
         "import os\n"
         "\n"
         "import matplotlib\n"
         "matplotlib.use(\"Agg\")\n"
         "import matplotlib.pyplot as plt\n"
         "\n"
         "HINTS = json.loads(r'''" << hints.dump() << "''')\n"
         "\n"
         "\n"
         "def num(cell):\n"
         "    return float(cell) if cell != \"\" else math.nan\n"
         "\n"
         "\n"
         "def main():\n"
         "    here = os.path.dirname(os.path.abspath(__file__))\n"
         "    with open(os.path.join(here, HINTS[\"csv\"]), newline=\"\") as f:\n"
         "        rows = list(csv.DictReader(f))\n"
         "    if not rows:\n"
         "        print(\"no rows to plot\")\n"
         "        return\n"
         "    xs_all = [num(r[HINTS[\"x\"]]) for r in rows]\n"
         "    finite = [x for x in xs_all if math.isfinite(x)]\n"
         "    inf_pos = (max(finite) + 1) if finite else 0.0\n"
         "    groups = {}\n"
         "    for r, x in zip(rows, xs_all):\n"
         "        key = r[HINTS[\"group\"]] if HINTS[\"group\"] else \"\"\n"
         "        groups.setdefault(key, []).append((inf_pos if math.isinf(x) else x, r))\n"
         "    fig, ax = plt.subplots(figsize=(6.4, 4.8))\n"
         "    markers = [\"-\", \"o\", \"--\", \"s\"]\n"
         "    for key, pts in groups.items():\n"
         "        for i, col in enumerate(HINTS[\"curves\"]):\n"
         "            ys = [num(r[col]) for _, r in pts]\n"
         "            if all(math.isnan(y) for y in ys):\n"
         "                continue\n"
         "            label = col if not key else f\"{col}, {HINTS['group']}={key}\"\n"
         "            ax.plot([x for x, _ in pts], ys, markers[i % len(markers)], label=label, fillstyle=\"none\")\n"
         "    if any(math.isinf(x) for x in xs_all):\n"
         "        ticks = sorted(set(finite)) + [inf_pos]\n"
         "        ax.set_xticks(ticks)\n"
         "        ax.set_xticklabels([f\"{t:g}\" for t in ticks[:-1]] + [\"inf\"])\n"
         "    ax.set_xlabel(HINTS[\"xlabel\"])\n"
         "    ax.set_ylabel(HINTS[\"ylabel\"])\n"
         "    ax.set_title(HINTS[\"title\"])\n"
         "    ax.grid(True, alpha=0.3)\n"
         "    ax.legend(fontsize=\"small\")\n"
         "    fig.tight_layout()\n"
         "    out = os.path.join(here, HINTS[\"title\"] + \".png\")\n"
         "    fig.savefig(out, dpi=150)\n"
         "    print(out)\n"
         "\n"
         "\n"
         "if __name__ == \"__main__\":\n"
         "    main()\n";
    return s.str();
}

} // namespace

std::string format_number(double value)
{
    if (std::isnan(value))
        return {};
    if (std::isinf(value))
        return value > 0 ? "inf" : "-inf";
    if (value == 0.0)
        return "0";
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 12);
    return std::string(buf, r.ptr);
}

std::string render_csv(const SweepResult &result)
{
    std::string out;
    for (std::size_t c = 0; c < result.columns.size(); ++c)
    {
        if (c)
            out += ',';
        out += result.columns[c];
    }
    out += '\n';
    for (const auto &row : result.rows)
    {
        for (std::size_t c = 0; c < row.size(); ++c)
        {
            if (c)
                out += ',';
            out += format_number(row[c]);
        }
        out += '\n';
    }
    return out;
}

OutputFiles emit_outputs(const SweepResult &result, const std::filesystem::path &dir)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec)
        throw Error(ErrorKind::io_error, "cannot create '" + dir.string() + "': " + ec.message());

    const std::string name = to_string(result.kind);
    OutputFiles files{dir / (name + ".csv"), dir / (name + ".meta.json"), dir / ("plot_" + name + ".py")};

    nlohmann::json meta = result.metadata;
    meta["columns"] = result.columns;
    meta["rows"] = result.rows.size();
    meta["wall_time_s"] = result.wall_time_s;
    std::vector<std::string> warnings = result.warnings;
    if (result.rows.empty())
        warnings.push_back("experiment produced no rows; the CSV holds only the header");
    meta["warnings"] = warnings;

    write_file(files.csv, render_csv(result));
    write_file(files.metadata, meta.dump(2) + "\n");
    write_file(files.plot_script, plot_script(result, files.csv.filename().string()));
    return files;
}

} // namespace rislab
