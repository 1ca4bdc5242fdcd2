// bwtglue command-line front end: index construction, queries, grammar
// tooling, and the sharded search client/server.

#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bwtglue/avl_grammar.hpp"
#include "bwtglue/byte_stream.hpp"
#include "bwtglue/errors.hpp"
#include "bwtglue/fm_index.hpp"
#include "bwtglue/grammar_search.hpp"
#include "bwtglue/interval.hpp"
#include "bwtglue/lz77.hpp"
#include "bwtglue/orchestrator.hpp"
#include "bwtglue/protocol.hpp"
#include "bwtglue/shard.hpp"
#include "bwtglue/shard_server.hpp"
#include "bwtglue/wildcard.hpp"

namespace {

using nlohmann::json;
using namespace bwtglue;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    if (!in.good() && !in.eof()) throw std::runtime_error("cannot read " + path);
    return std::move(ss).str();
}

void write_file(const std::string& path, std::string_view bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("cannot write " + path);
}

// Newline-delimited patterns; blank lines are skipped.
std::vector<std::string> read_pattern_file(const std::string& path) {
    std::vector<std::string> out;
    std::istringstream in(read_file(path));
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) out.push_back(line);
    }
    return out;
}

std::vector<std::string> gather_patterns(const std::vector<std::string>& inline_patterns,
                                         const std::string& patterns_file) {
    std::vector<std::string> patterns = inline_patterns;
    if (!patterns_file.empty()) {
        auto from_file = read_pattern_file(patterns_file);
        patterns.insert(patterns.end(), from_file.begin(), from_file.end());
    }
    for (const auto& p : patterns)
        if (p.empty()) throw std::invalid_argument("empty pattern");
    return patterns;
}

std::pair<std::string, std::uint16_t> split_endpoint(const std::string& endpoint) {
    const std::size_t colon = endpoint.rfind(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 == endpoint.size())
        throw std::invalid_argument("endpoint must be host:port, got '" + endpoint + "'");
    const std::string host = endpoint.substr(0, colon);
    const int port = std::stoi(endpoint.substr(colon + 1));
    if (port < 0 || port > 65535) throw std::invalid_argument("port out of range in " + endpoint);
    return {host, static_cast<std::uint16_t>(port)};
}

void print_match_line(const std::string& pattern, std::uint64_t count,
                      const std::vector<std::uint64_t>* positions, bool json_lines) {
    if (json_lines) {
        json j{{"pattern", pattern}, {"count", count}};
        if (positions) j["positions"] = *positions;
        std::cout << j.dump() << '\n';
        return;
    }
    std::cout << pattern << '\t' << count;
    if (positions) {
        std::cout << '\t';
        for (std::size_t i = 0; i < positions->size(); ++i) {
            if (i) std::cout << ' ';
            std::cout << (*positions)[i];
        }
    }
    std::cout << '\n';
}

struct GrammarPlan {
    ParseResult parse;
    Grammar grammar;
    std::vector<RuleId> roots;  // one per pattern
};

GrammarPlan build_plan(const std::vector<std::string>& patterns) {
    GrammarPlan plan{parse_multi(patterns), Grammar{}, {}};
    plan.grammar = from_lz77(plan.parse);
    plan.roots = plan.grammar.split_patterns(plan.grammar.roots().at(0),
                                             plan.parse.pattern_boundaries);
    plan.grammar.set_roots(plan.roots);
    return plan;
}

int cmd_build(const std::string& input, const std::string& output, std::uint64_t sample_rate,
              bool keep_trailing_newline, bool json_lines) {
    std::string text = read_file(input);
    if (!keep_trailing_newline && !text.empty() && text.back() == '\n') text.pop_back();
    if (text.empty()) throw std::invalid_argument("input file " + input + " is empty");

    BwtIndex index = BwtIndex::build(text, sample_rate);
    index.save(output);
    if (json_lines) {
        std::cout << json{{"n", index.text_len()},
                          {"alphabet_size", index.alphabet().size()},
                          {"sample_rate", index.sample_rate()},
                          {"output", output}}
                         .dump()
                  << '\n';
    } else {
        std::cout << "indexed " << index.text_len() << " chars, alphabet "
                  << index.alphabet().size() << ", sample rate " << index.sample_rate() << " -> "
                  << output << '\n';
    }
    return 0;
}

int cmd_count_or_locate(const std::string& index_path, const std::vector<std::string>& inline_pats,
                        const std::string& patterns_file, bool with_positions, bool json_lines) {
    const BwtIndex index = BwtIndex::load(index_path);
    for (const std::string& p : gather_patterns(inline_pats, patterns_file)) {
        const Interval iv = index.backward_search(p);
        if (with_positions) {
            const std::vector<std::uint64_t> positions = index.locate_all(iv, p.size());
            print_match_line(p, positions.size(), &positions, json_lines);
        } else {
            print_match_line(p, iv.size(), nullptr, json_lines);
        }
    }
    return 0;
}

int cmd_multi_search(const std::string& index_path, const std::vector<std::string>& inline_pats,
                     const std::string& patterns_file, unsigned workers, bool stats,
                     bool json_lines) {
    const BwtIndex index = BwtIndex::load(index_path);
    const std::vector<std::string> patterns = gather_patterns(inline_pats, patterns_file);
    if (patterns.empty()) return 0;

    GrammarPlan plan = build_plan(patterns);
    SearchStats search_stats;
    const std::vector<Interval> intervals =
        search_grammar_parallel(index, plan.grammar, plan.roots, workers, &search_stats);

    for (std::size_t i = 0; i < patterns.size(); ++i) {
        const std::vector<std::uint64_t> positions =
            index.locate_all(intervals[i], patterns[i].size());
        print_match_line(patterns[i], positions.size(), &positions, json_lines);
    }

    if (stats) {
        std::cerr << "phrases: " << plan.parse.phrase_count()
                  << "\nrules total: " << plan.grammar.rule_count()
                  << "\nrules live: " << plan.grammar.live_rule_count(plan.roots)
                  << "\nglue calls: " << search_stats.glue_calls << "\nlevel sizes:";
        for (std::size_t s : search_stats.level_sizes) std::cerr << ' ' << s;
        std::cerr << '\n';
    }
    return 0;
}

int cmd_wildcard(const std::string& index_path, const std::string& pattern,
                 const std::string& mode, bool json_lines) {
    const BwtIndex index = BwtIndex::load(index_path);
    const WildcardPattern parsed = parse_wildcard_pattern(pattern);

    std::vector<std::pair<std::uint64_t, std::uint64_t>> spans;
    if (mode == "exact") {
        const std::uint64_t span_len = parsed.core_length();
        for (std::uint64_t start : match_exact(index, parsed))
            spans.emplace_back(start, start + span_len - 1);
    } else if (mode == "flexible") {
        spans = match_flexible(index, parsed);
    } else {
        throw std::invalid_argument("mode must be 'exact' or 'flexible'");
    }

    for (const auto& [start, end] : spans) {
        const std::string match = index.extract(start, end - start + 1);
        if (json_lines)
            std::cout << json{{"start", start}, {"end", end}, {"match", match}}.dump() << '\n';
        else
            std::cout << start << '\t' << end << '\t' << match << '\n';
    }
    return 0;
}

std::string dump_phrases(const ParseResult& parse) {
    std::ostringstream out;
    for (const Phrase& ph : parse.phrases) {
        if (ph.kind == Phrase::Kind::literal)
            out << "L " << ph.symbol << '\n';
        else
            out << "C " << ph.src << ' ' << ph.len << '\n';
    }
    if (parse.pattern_boundaries.size() > 1) {
        out << 'B';
        for (std::uint64_t b : parse.pattern_boundaries) out << ' ' << b;
        out << '\n';
    }
    return std::move(out).str();
}

ParseResult parse_dump(const std::string& dump) {
    ParseResult parse;
    std::istringstream in(dump);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == 'L') {
            if (line.size() != 3 || line[1] != ' ')
                throw FormatError("bad literal line: '" + line + "'");
            parse.phrases.push_back(Phrase::lit(line[2]));
        } else if (line[0] == 'C') {
            std::istringstream fields(line.substr(1));
            std::uint64_t src = 0, len = 0;
            if (!(fields >> src >> len)) throw FormatError("bad copy line: '" + line + "'");
            parse.phrases.push_back(Phrase::copy(src, len));
        } else if (line[0] == 'B') {
            std::istringstream fields(line.substr(1));
            std::uint64_t b = 0;
            while (fields >> b) parse.pattern_boundaries.push_back(b);
        } else {
            throw FormatError("unrecognized dump line: '" + line + "'");
        }
    }
    if (parse.pattern_boundaries.empty() && !parse.phrases.empty()) {
        std::uint64_t total = 0;
        for (const Phrase& ph : parse.phrases)
            total += ph.kind == Phrase::Kind::literal ? 1 : ph.len;
        parse.pattern_boundaries.push_back(total);
    }
    return parse;
}

int cmd_lz77(const std::string& input, const std::string& patterns_file,
             const std::string& decode_path, const std::string& output) {
    std::string result;
    if (!decode_path.empty()) {
        result = decode(parse_dump(read_file(decode_path)).phrases);
    } else {
        ParseResult parse;
        if (!patterns_file.empty())
            parse = parse_multi(read_pattern_file(patterns_file));
        else
            parse = bwtglue::parse(read_file(input));
        result = dump_phrases(parse);
    }
    if (output.empty())
        std::cout << result;
    else
        write_file(output, result);
    return 0;
}

int cmd_grammar(const std::string& input, const std::string& patterns_file,
                const std::string& output, bool stats, bool expand_roots) {
    GrammarPlan plan;
    if (!patterns_file.empty()) {
        plan = build_plan(read_pattern_file(patterns_file));
    } else {
        plan.parse = bwtglue::parse(read_file(input));
        plan.grammar = from_lz77(plan.parse);
        plan.roots = plan.grammar.roots();
    }

    if (!output.empty()) write_file(output, serialize_grammar(plan.grammar, plan.roots));

    std::uint32_t max_height = 0;
    for (RuleId r : plan.roots) max_height = std::max(max_height, plan.grammar.height(r));
    std::cout << "grammar: " << plan.grammar.live_rule_count(plan.roots) << " rules (" <<
        plan.grammar.rule_count() << " built), " << plan.roots.size() << " roots, height "
              << max_height << '\n';

    if (expand_roots)
        for (RuleId r : plan.roots) std::cout << plan.grammar.expand(r) << '\n';

    if (stats) {
        const LevelSchedule sched = level_schedule(plan.grammar, plan.roots);
        std::cerr << "phrases: " << plan.parse.phrase_count() << "\nlevel sizes:";
        for (const auto& level : sched.levels) std::cerr << ' ' << level.size();
        std::cerr << '\n';
    }
    return 0;
}

int cmd_serve_shard(const std::string& index_path, const std::string& listen_endpoint,
                    std::uint32_t shard_id, std::uint64_t global_offset, std::uint64_t owned_len) {
    BwtIndex index = BwtIndex::load(index_path);

    ShardSpec spec;
    spec.shard_id = shard_id;
    spec.global_offset = global_offset;
    spec.text_len = index.text_len();
    if (owned_len == 0) owned_len = index.text_len();
    if (owned_len > index.text_len())
        throw std::invalid_argument("--owned-len exceeds the indexed text length");
    spec.overlap = index.text_len() - owned_len;

    const auto [host, port] = split_endpoint(listen_endpoint);
    TcpListener listener(host, port);
    std::cout << "listening on " << host << ':' << listener.port() << std::endl;

    ShardServer server(std::move(index), spec);
    while (!server.shutdown_requested()) {
        std::unique_ptr<ByteStream> conn = listener.accept();
        server.serve_connection(*conn);
    }
    return 0;
}

int cmd_dist_query(const std::vector<std::string>& endpoints,
                   const std::vector<std::string>& inline_pats, const std::string& patterns_file,
                   const std::string& mode_name, bool shutdown, bool stats, bool json_lines) {
    const std::vector<std::string> patterns = gather_patterns(inline_pats, patterns_file);
    if (patterns.empty() && !shutdown)
        throw std::invalid_argument("nothing to do: no patterns and no --shutdown");

    std::vector<std::unique_ptr<ByteStream>> streams;
    std::vector<ShardConnection> shards;
    for (const std::string& ep : endpoints) {
        const auto [host, port] = split_endpoint(ep);
        try {
            streams.push_back(tcp_connect(host, port));
        } catch (const ProtocolError& e) {
            throw ShardError(ep, e.what());
        }
        shards.push_back({ep, streams.back().get()});
    }

    if (!patterns.empty()) {
        const SearchMode mode = search_mode_from_string(mode_name);
        OrchestrateStats ostats;
        const DistributedResult result = orchestrate(patterns, shards, mode, &ostats);
        for (std::size_t i = 0; i < patterns.size(); ++i)
            print_match_line(patterns[i], result.counts[i],
                             mode == SearchMode::locate ? &result.positions[i] : nullptr,
                             json_lines);
        if (stats)
            std::cerr << "plan serializations: " << ostats.plan_serializations
                      << "\nplan bytes: " << ostats.plan_bytes
                      << "\nphrases: " << ostats.parse_phrases
                      << "\ngrammar rules: " << ostats.grammar_rules << '\n';
    }

    if (shutdown) {
        const std::size_t acks = broadcast_shutdown(shards);
        std::cerr << "shutdown acknowledged by " << acks << '/' << shards.size() << " shards\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"compressed full-text index: build, query, and sharded search"};
    app.require_subcommand(1);
    app.fallthrough();  // lets --json appear after the subcommand name

    bool json_lines = false;
    app.add_flag("--json", json_lines, "emit one JSON object per result line");

    std::function<int()> run;

    {
        auto* c = app.add_subcommand("build", "build an index from a text file");
        auto input = std::make_shared<std::string>();
        auto output = std::make_shared<std::string>();
        auto rate = std::make_shared<std::uint64_t>(BwtIndex::kDefaultSampleRate);
        auto keep_nl = std::make_shared<bool>(false);
        c->add_option("-i,--input", *input, "text file to index")->required();
        c->add_option("-o,--output", *output, "index file to write")->required();
        c->add_option("--sample-rate", *rate, "locate sample spacing (>= 1)");
        c->add_flag("--keep-trailing-newline", *keep_nl,
                    "index a final newline instead of stripping it");
        c->callback([&run, input, output, rate, keep_nl, &json_lines] {
            run = [=] { return cmd_build(*input, *output, *rate, *keep_nl, json_lines); };
        });
    }

    auto add_query_command = [&](const char* name, const char* help, bool with_positions) {
        auto* c = app.add_subcommand(name, help);
        auto index = std::make_shared<std::string>();
        auto pats = std::make_shared<std::vector<std::string>>();
        auto pat_file = std::make_shared<std::string>();
        c->add_option("--index", *index, "index file")->required();
        auto* inline_opt = c->add_option("-p,--pattern", *pats, "pattern (repeatable)");
        c->add_option("--patterns-file", *pat_file, "file with one pattern per line")
            ->excludes(inline_opt);
        c->callback([&run, index, pats, pat_file, with_positions, &json_lines] {
            run = [=] {
                return cmd_count_or_locate(*index, *pats, *pat_file, with_positions, json_lines);
            };
        });
    };
    add_query_command("count", "count pattern occurrences", false);
    add_query_command("locate", "list pattern occurrence positions", true);

    {
        auto* c = app.add_subcommand("multi-search",
                                     "search many patterns through one shared grammar");
        auto index = std::make_shared<std::string>();
        auto pats = std::make_shared<std::vector<std::string>>();
        auto pat_file = std::make_shared<std::string>();
        auto workers = std::make_shared<unsigned>(1);
        auto stats = std::make_shared<bool>(false);
        c->add_option("--index", *index, "index file")->required();
        auto* inline_opt = c->add_option("-p,--pattern", *pats, "pattern (repeatable)");
        c->add_option("--patterns-file", *pat_file, "file with one pattern per line")
            ->excludes(inline_opt);
        c->add_option("--workers", *workers, "worker threads per grammar level");
        c->add_flag("--stats", *stats, "print pipeline statistics to stderr");
        c->callback([&run, index, pats, pat_file, workers, stats, &json_lines] {
            run = [=] {
                return cmd_multi_search(*index, *pats, *pat_file, *workers, *stats, json_lines);
            };
        });
    }

    {
        auto* c = app.add_subcommand("wildcard", "match a pattern with ? wildcards");
        auto index = std::make_shared<std::string>();
        auto pattern = std::make_shared<std::string>();
        auto mode = std::make_shared<std::string>("exact");
        c->add_option("--index", *index, "index file")->required();
        c->add_option("-p,--pattern", *pattern, "pattern; ? matches any symbol")->required();
        c->add_option("--mode", *mode, "exact (gaps match exactly) or flexible (gaps are maxima)");
        c->callback([&run, index, pattern, mode, &json_lines] {
            run = [=] { return cmd_wildcard(*index, *pattern, *mode, json_lines); };
        });
    }

    {
        auto* c = app.add_subcommand("lz77", "factorize text, or decode a phrase dump");
        auto input = std::make_shared<std::string>();
        auto pat_file = std::make_shared<std::string>();
        auto decode_path = std::make_shared<std::string>();
        auto output = std::make_shared<std::string>();
        auto* in_opt = c->add_option("-i,--input", *input, "text file to factorize");
        auto* pf_opt = c->add_option("--patterns-file", *pat_file,
                                     "factorize the concatenation of these patterns");
        auto* dec_opt = c->add_option("--decode", *decode_path, "phrase dump to decode");
        in_opt->excludes(pf_opt)->excludes(dec_opt);
        pf_opt->excludes(dec_opt);
        c->add_option("-o,--output", *output, "write here instead of stdout");
        c->callback([&run, input, pat_file, decode_path, output] {
            run = [=] {
                if (input->empty() && pat_file->empty() && decode_path->empty())
                    throw CLI::RequiredError("lz77: one of --input/--patterns-file/--decode");
                return cmd_lz77(*input, *pat_file, *decode_path, *output);
            };
        });
    }

    {
        auto* c = app.add_subcommand("grammar", "build a grammar from text or patterns");
        auto input = std::make_shared<std::string>();
        auto pat_file = std::make_shared<std::string>();
        auto output = std::make_shared<std::string>();
        auto stats = std::make_shared<bool>(false);
        auto expand_roots = std::make_shared<bool>(false);
        auto* in_opt = c->add_option("-i,--input", *input, "text file");
        c->add_option("--patterns-file", *pat_file, "file with one pattern per line")
            ->excludes(in_opt);
        c->add_option("-o,--output", *output, "serialized grammar file to write");
        c->add_flag("--stats", *stats, "print statistics to stderr");
        c->add_flag("--expand", *expand_roots, "print each root's expansion");
        c->callback([&run, input, pat_file, output, stats, expand_roots] {
            run = [=] {
                if (input->empty() && pat_file->empty())
                    throw CLI::RequiredError("grammar: one of --input/--patterns-file");
                return cmd_grammar(*input, *pat_file, *output, *stats, *expand_roots);
            };
        });
    }

    {
        auto* c = app.add_subcommand("serve-shard", "serve one shard over TCP");
        auto index = std::make_shared<std::string>();
        auto listen = std::make_shared<std::string>();
        auto shard_id = std::make_shared<std::uint32_t>(0);
        auto offset = std::make_shared<std::uint64_t>(1);
        auto owned = std::make_shared<std::uint64_t>(0);
        c->add_option("--index", *index, "index file for this shard's slice")->required();
        c->add_option("--listen", *listen, "host:port (port 0 picks one)")->required();
        c->add_option("--shard-id", *shard_id, "numeric shard id");
        c->add_option("--global-offset", *offset, "1-based global position of the slice start");
        c->add_option("--owned-len", *owned,
                      "chars owned by this shard (default: whole slice, i.e. no overlap)");
        c->callback([&run, index, listen, shard_id, offset, owned] {
            run = [=] { return cmd_serve_shard(*index, *listen, *shard_id, *offset, *owned); };
        });
    }

    {
        auto* c = app.add_subcommand("dist-query", "query shard servers and aggregate");
        auto endpoints = std::make_shared<std::vector<std::string>>();
        auto pats = std::make_shared<std::vector<std::string>>();
        auto pat_file = std::make_shared<std::string>();
        auto mode = std::make_shared<std::string>("count");
        auto shutdown = std::make_shared<bool>(false);
        auto stats = std::make_shared<bool>(false);
        c->add_option("--shard", *endpoints, "shard endpoint host:port (repeatable)")->required();
        auto* inline_opt = c->add_option("-p,--pattern", *pats, "pattern (repeatable)");
        c->add_option("--patterns-file", *pat_file, "file with one pattern per line")
            ->excludes(inline_opt);
        c->add_option("--mode", *mode, "count or locate");
        c->add_flag("--shutdown", *shutdown, "ask the shards to exit afterwards");
        c->add_flag("--stats", *stats, "print plan statistics to stderr");
        c->callback([&run, endpoints, pats, pat_file, mode, shutdown, stats, &json_lines] {
            run = [=] {
                return cmd_dist_query(*endpoints, *pats, *pat_file, *mode, *shutdown, *stats,
                                      json_lines);
            };
        });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        return run();
    } catch (const ShardError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const ProtocolError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
