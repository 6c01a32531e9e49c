// Grep-style front end: pattern search and throughput measurement over
// files or standard input.
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "resharp/resharp.hpp"

namespace {

using namespace resharp;
using nlohmann::json;

struct GrepConfig {
  std::string pattern;
  std::vector<std::string> inputs;
  std::string output = "text";  // spans | text | json
  bool first_only = false;
  bool count_only = false;
  bool ignore_case = false;
  bool ascii_classes = false;
  bool line_mode = false;
  bool multiline_buffer = false;
  bool byte_offsets = false;
  bool oracle_check = false;
  bool use_oracle = false;
  bool stats = false;
  bool trace = false;
  size_t max_states = 100000;
  std::string word_table, digit_table, space_table;
};

std::string read_stream(std::istream& in) {
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool read_input(const std::string& path, std::string& out, std::string& err) {
  if (path == "-") {
    out = read_stream(std::cin);
    return true;
  }
  std::ifstream f(path, std::ios::binary);
  if (!f) {
    err = "cannot open " + path;
    return false;
  }
  out = read_stream(f);
  return true;
}

CompileOptions make_compile_options(const GrepConfig& cfg) {
  CompileOptions co;
  co.parse.ignore_case = cfg.ignore_case;
  co.max_states = cfg.max_states;
  co.classes = CharClassTable::ascii();
  if (!cfg.ascii_classes) {
    if (!cfg.word_table.empty()) co.classes.word = load_ranges_file(cfg.word_table);
    if (!cfg.digit_table.empty())
      co.classes.digit = load_ranges_file(cfg.digit_table);
    if (!cfg.space_table.empty())
      co.classes.space = load_ranges_file(cfg.space_table);
  }
  return co;
}

std::string escape_for_dump(std::span<const uint32_t> text) {
  std::string out;
  for (uint32_t c : text) {
    if (c == '\n')
      out += "\\n";
    else if (c == '\t')
      out += "\\t";
    else if (c < 0x20 || c > 0x7E) {
      char buf[16];
      snprintf(buf, sizeof buf, "\\x{%X}", c);
      out += buf;
    } else {
      out.push_back(static_cast<char>(c));
    }
  }
  return out;
}

struct Unit {
  std::span<const uint32_t> text;  // code points of this matching unit
  size_t cp_base;                  // code-point offset of the unit in the buffer
};

int run_grep(const GrepConfig& cfg) {
  CompiledPattern cp = CompiledPattern::compile(cfg.pattern,
                                                make_compile_options(cfg));
  MatchStats stats;
  bool any_match = false;
  for (const auto& path : cfg.inputs) {
    std::string raw, err;
    if (!read_input(path, raw, err)) {
      std::cerr << "resharp: " << err << "\n";
      return 2;
    }
    DecodedText dec = utf8_decode_all(raw);
    std::span<const uint32_t> all(dec.points);

    std::vector<Unit> units;
    if (cfg.line_mode) {
      size_t start = 0;
      for (size_t i = 0; i <= all.size(); ++i) {
        if (i == all.size() || all[i] == '\n') {
          units.push_back({all.subspan(start, i - start), start});
          start = i + 1;
        }
      }
    } else {
      units.push_back({all, 0});
    }

    size_t file_count = 0;
    for (const Unit& u : units) {
      std::vector<Span> spans;
      if (cfg.use_oracle) {
        if (u.text.size() > kOracleInputGuard) {
          std::cerr << "resharp: --oracle requires units of at most "
                    << kOracleInputGuard << " code points\n";
          return 2;
        }
        Pool pool(Pool::Options{make_compile_options(cfg).classes, false, 4096});
        ParseFlags pf;
        pf.ignore_case = cfg.ignore_case;
        spans = oracle_ll_matches(u.text, parse(pool, cfg.pattern, pf));
        if (cfg.first_only && spans.size() > 1) spans.resize(1);
      } else {
        MatchOptions mo;
        mo.stats = cfg.stats ? &stats : nullptr;
        std::vector<TraceStep> steps;
        if (cfg.trace) mo.trace = &steps;
        if (cfg.first_only) {
          if (auto m = cp.find(u.text, mo)) spans.push_back(*m);
        } else {
          spans = cp.find_all(u.text, mo);
        }
        if (cfg.trace) {
          for (const auto& s : steps) {
            std::cerr << "trace pos=" << s.pos << " state=" << to_pattern(s.node);
            if (s.recorded) std::cerr << " recorded_min=" << s.recorded->min();
            std::cerr << "\n";
          }
        }
      }

      if (cfg.oracle_check) {
        if (u.text.size() > kOracleInputGuard) {
          std::cerr << "resharp: --oracle-check requires units of at most "
                    << kOracleInputGuard << " code points (use --line-mode)\n";
          return 2;
        }
        Pool pool(Pool::Options{make_compile_options(cfg).classes, false, 4096});
        ParseFlags pf;
        pf.ignore_case = cfg.ignore_case;
        auto expect = oracle_ll_matches(u.text, parse(pool, cfg.pattern, pf));
        auto got = cfg.first_only && !expect.empty()
                       ? std::vector<Span>{expect[0]}
                       : expect;
        if (spans != got) {
          std::cerr << "resharp: ORACLE MISMATCH\n  pattern: " << cfg.pattern
                    << "\n  input:   \"" << escape_for_dump(u.text) << "\"\n"
                    << "  engine:  ";
          for (auto& s : spans) std::cerr << "(" << s.start << "," << s.end << ")";
          std::cerr << "\n  oracle:  ";
          for (auto& s : got) std::cerr << "(" << s.start << "," << s.end << ")";
          std::cerr << "\n";
          return 2;
        }
      }

      any_match |= !spans.empty();
      file_count += spans.size();
      if (cfg.count_only) continue;
      for (const Span& s : spans) {
        const size_t cps_start = u.cp_base + static_cast<size_t>(s.start);
        const size_t cps_end = u.cp_base + static_cast<size_t>(s.end);
        int64_t out_start = static_cast<int64_t>(cps_start);
        int64_t out_end = static_cast<int64_t>(cps_end);
        if (cfg.byte_offsets) {
          out_start = static_cast<int64_t>(dec.byte_offset[cps_start]);
          out_end = static_cast<int64_t>(dec.byte_offset[cps_end]);
        }
        std::string text;
        for (size_t k = cps_start; k < cps_end; ++k)
          utf8_encode(dec.points[k], text);
        if (cfg.output == "spans") {
          std::cout << out_start << ":" << out_end << "\n";
        } else if (cfg.output == "json") {
          json rec = {{"path", path},
                      {"start", out_start},
                      {"end", out_end},
                      {"text", text}};
          std::cout << rec.dump() << "\n";
        } else {
          std::cout << text << "\n";
        }
      }
    }
    if (cfg.count_only) {
      if (cfg.inputs.size() > 1) std::cout << path << ":";
      std::cout << file_count << "\n";
    }
  }
  if (cfg.stats) {
    std::cerr << "stats states_created=" << stats.states_created
              << " transitions=" << stats.transitions
              << " cache_lookups=" << stats.cache_lookups
              << " chars_skipped=" << stats.chars_skipped << "\n";
  }
  return any_match ? 0 : 1;
}

struct BenchConfig {
  std::string pattern;
  std::string input;
  std::vector<size_t> sizes{1, 2, 10};
  std::string csv_path;
  bool first_only = false;
  bool ignore_case = false;
  size_t max_states = 100000;
};

int run_bench(const BenchConfig& cfg) {
  std::string raw, err;
  if (!read_input(cfg.input, raw, err)) {
    std::cerr << "resharp: " << err << "\n";
    return 2;
  }
  CompileOptions co;
  co.parse.ignore_case = cfg.ignore_case;
  co.max_states = cfg.max_states;
  co.min_offset_only = cfg.first_only;
  CompiledPattern cp = CompiledPattern::compile(cfg.pattern, co);

  std::ostringstream csv;
  csv << "size,bytes,code_points,elapsed_ns,bytes_per_sec,matches,"
         "states_created,transitions,cache_lookups,chars_skipped\n";
  for (size_t factor : cfg.sizes) {
    std::string buffer;
    buffer.reserve(raw.size() * factor);
    for (size_t k = 0; k < factor; ++k) buffer += raw;
    DecodedText dec = utf8_decode_all(buffer);
    std::span<const uint32_t> text(dec.points);
    MatchStats st;
    MatchOptions mo;
    mo.stats = &st;
    size_t matches = 0;
    auto t0 = std::chrono::steady_clock::now();
    if (cfg.first_only) {
      matches = cp.find(text, mo).has_value() ? 1 : 0;
    } else {
      matches = cp.find_all(text, mo).size();
    }
    auto t1 = std::chrono::steady_clock::now();
    auto ns = std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count();
    double bps = ns > 0 ? buffer.size() * 1e9 / static_cast<double>(ns) : 0.0;
    csv << factor << "," << buffer.size() << "," << dec.points.size() << ","
        << ns << "," << static_cast<uint64_t>(bps) << "," << matches << ","
        << st.states_created << "," << st.transitions << ","
        << st.cache_lookups << "," << st.chars_skipped << "\n";
  }
  if (!cfg.csv_path.empty()) {
    std::ofstream out(cfg.csv_path);
    if (!out) {
      std::cerr << "resharp: cannot write " << cfg.csv_path << "\n";
      return 2;
    }
    out << csv.str();
  } else {
    std::cout << csv.str();
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"resharp: derivative-based regex search with intersection, "
               "complement and lookarounds"};
  app.require_subcommand(1);

  GrepConfig g;
  auto* grep = app.add_subcommand("grep", "search files or stdin for matches");
  grep->add_option("-e,--regexp", g.pattern, "pattern")->required();
  grep->add_option("files", g.inputs, "input files ('-' for stdin)");
  grep->add_option("--output", g.output, "output mode")
      ->check(CLI::IsMember({"spans", "text", "json"}))
      ->default_val("text");
  grep->add_flag("--first", g.first_only, "report only the first match per unit");
  grep->add_flag("--count", g.count_only, "print match counts only");
  grep->add_flag("-i,--ignore-case", g.ignore_case, "case-insensitive matching");
  grep->add_flag("--ascii", g.ascii_classes,
                 "force the ASCII \\w/\\d/\\s tables");
  grep->add_option("--max-states", g.max_states, "lazy DFA state limit")
      ->default_val(100000);
  grep->add_flag("--oracle-check", g.oracle_check,
                 "verify every span list against the reference oracle "
                 "(small units only)");
  grep->add_flag("--stats", g.stats, "print instrumentation counters");
  grep->add_flag("--line-mode", g.line_mode,
                 "match each line separately instead of the whole buffer");
  grep->add_flag("--multiline-buffer", g.multiline_buffer,
                 "match the whole buffer at once (the default)");
  grep->add_flag("--byte-offsets", g.byte_offsets,
                 "report UTF-8 byte positions instead of code points");
  grep->add_option("--word-table", g.word_table, "extended \\w ranges file");
  grep->add_option("--digit-table", g.digit_table, "extended \\d ranges file");
  grep->add_option("--space-table", g.space_table, "extended \\s ranges file");
  grep->add_flag("--oracle", g.use_oracle)->group("");  // debugging
  grep->add_flag("--trace", g.trace)->group("");        // debugging

  BenchConfig b;
  auto* bench = app.add_subcommand("bench", "measure throughput over scaled inputs");
  bench->add_option("-e,--regexp", b.pattern, "pattern")->required();
  bench->add_option("--input", b.input, "input file")->required();
  bench->add_option("--sizes", b.sizes, "replication factors")->delimiter(',');
  bench->add_option("--csv", b.csv_path, "write the CSV here instead of stdout");
  bench->add_flag("--first", b.first_only, "time single-match search");
  bench->add_flag("-i,--ignore-case", b.ignore_case, "case-insensitive matching");
  bench->add_option("--max-states", b.max_states, "lazy DFA state limit")
      ->default_val(100000);

  CLI11_PARSE(app, argc, argv);

  try {
    if (grep->parsed()) {
      if (g.line_mode && g.multiline_buffer) {
        std::cerr << "resharp: --line-mode conflicts with --multiline-buffer\n";
        return 2;
      }
      if (g.inputs.empty()) g.inputs.push_back("-");
      return run_grep(g);
    }
    return run_bench(b);
  } catch (const ParseError& e) {
    std::cerr << "resharp: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "resharp: " << e.what() << "\n";
    return 2;
  }
}
