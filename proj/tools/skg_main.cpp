#include <algorithm>
#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "skg/errors.hpp"
#include "skg/executor/engine.hpp"
#include "skg/optimizer/planner.hpp"
#include "skg/parser/ntriples.hpp"
#include "skg/parser/sparql.hpp"
#include "skg/store/knowledge_base.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw skg::Error("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

uint64_t fnv1a(const std::vector<std::vector<std::string>>& rows) {
    uint64_t h = 1469598103934665603ull;
    auto mix = [&](char c) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull;
    };
    for (const auto& row : rows) {
        for (const auto& cell : row) {
            for (char c : cell) mix(c);
            mix('\t');
        }
        mix('\n');
    }
    return h;
}

uint64_t resident_kb() {
    std::ifstream in("/proc/self/status");
    std::string line;
    while (std::getline(in, line))
        if (line.rfind("VmRSS:", 0) == 0) {
            std::istringstream fields(line.substr(6));
            uint64_t kb = 0;
            fields >> kb;
            return kb;
        }
    return 0;
}

std::string csv_escape(const std::string& cell) {
    if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
    std::string out = "\"";
    for (char c : cell) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

void print_rows(const std::vector<std::string>& columns,
                const std::vector<std::vector<std::string>>& rows, const std::string& format) {
    if (format == "json") {
        nlohmann::json out = nlohmann::json::array();
        for (const auto& row : rows) {
            nlohmann::json obj;
            for (std::size_t i = 0; i < columns.size(); ++i) obj[columns[i]] = row[i];
            out.push_back(std::move(obj));
        }
        std::cout << out.dump(2) << "\n";
        return;
    }
    const char sep = format == "csv" ? ',' : '\t';
    for (std::size_t i = 0; i < columns.size(); ++i)
        std::cout << (i ? std::string(1, sep) : "") << "?" + columns[i];
    std::cout << "\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) std::cout << sep;
            std::cout << (format == "csv" ? csv_escape(row[i]) : row[i]);
        }
        std::cout << "\n";
    }
}

struct LoadedStore {
    skg::store::KnowledgeBase kb;
    bool from_image = false;
    bool has_ontology = false;
};

LoadedStore load_store(const std::string& store_path, const std::string& data_path,
                       const std::string& ontology_path) {
    LoadedStore loaded;
    if (!store_path.empty()) {
        std::ifstream in(store_path, std::ios::binary);
        if (!in) throw skg::Error("cannot open store image: " + store_path);
        loaded.kb = skg::store::KnowledgeBase::load(in);
        loaded.from_image = true;
        return loaded;
    }
    if (data_path.empty()) throw skg::Error("either --store or --data is required");
    const std::vector<skg::parser::RawTriple> triples =
        skg::parser::parse_ntriples(read_file(data_path));
    if (!ontology_path.empty()) {
        const auto ontology = skg::parser::parse_ontology(read_file(ontology_path));
        loaded.kb = skg::store::KnowledgeBase::build(ontology.graph, triples);
        loaded.has_ontology = true;
    } else {
        loaded.kb = skg::store::KnowledgeBase::build(triples);
    }
    return loaded;
}

int cmd_build(const std::string& ontology_path, const std::string& data_path,
              const std::string& store_path, const std::string& format) {
    const auto start = Clock::now();
    const std::string data_text = read_file(data_path);
    const std::vector<skg::parser::RawTriple> triples = skg::parser::parse_ntriples(data_text);

    skg::parser::OntologyParse ontology;
    if (!ontology_path.empty()) ontology = skg::parser::parse_ontology(read_file(ontology_path));

    skg::store::KnowledgeBase kb =
        skg::store::KnowledgeBase::build(ontology.graph, triples);
    const double build_ms = ms_since(start);

    skg::store::SerializedSizes sizes;
    if (!store_path.empty()) {
        std::ofstream out(store_path, std::ios::binary);
        if (!out) throw skg::Error("cannot write store image: " + store_path);
        sizes = kb.save(out);
    } else {
        std::ostringstream sink(std::ios::binary);
        sizes = kb.save(sink);
    }

    const auto& counts = kb.counts();
    if (format == "json") {
        nlohmann::json report{
            {"parsed_triples", counts.pre_dedup},
            {"object_triples", counts.object_triples},
            {"datatype_triples", counts.datatype_triples},
            {"rdf_type_triples", counts.type_triples},
            {"stored_triples", counts.total()},
            {"ignored_ontology_statements", ontology.ignored_statements},
            {"concept_entries", kb.concepts().size()},
            {"property_entries", kb.properties().size()},
            {"instance_entries", kb.instances().size()},
            {"concept_id_bits", kb.concepts().total_bits()},
            {"property_id_bits", kb.properties().total_bits()},
            {"build_ms", build_ms},
            {"header_bytes", sizes.header_bytes},
            {"dictionary_bytes", sizes.dictionary_bytes},
            {"data_bytes", sizes.data_bytes},
        };
        std::cout << report.dump(2) << "\n";
    } else {
        std::cout << "parsed_triples\t" << counts.pre_dedup << "\n"
                  << "object_triples\t" << counts.object_triples << "\n"
                  << "datatype_triples\t" << counts.datatype_triples << "\n"
                  << "rdf_type_triples\t" << counts.type_triples << "\n"
                  << "stored_triples\t" << counts.total() << "\n"
                  << "ignored_ontology_statements\t" << ontology.ignored_statements << "\n"
                  << "concept_entries\t" << kb.concepts().size() << "\n"
                  << "property_entries\t" << kb.properties().size() << "\n"
                  << "instance_entries\t" << kb.instances().size() << "\n"
                  << "concept_id_bits\t" << static_cast<int>(kb.concepts().total_bits()) << "\n"
                  << "property_id_bits\t" << static_cast<int>(kb.properties().total_bits())
                  << "\n"
                  << "build_ms\t" << build_ms << "\n"
                  << "header_bytes\t" << sizes.header_bytes << "\n"
                  << "dictionary_bytes\t" << sizes.dictionary_bytes << "\n"
                  << "data_bytes\t" << sizes.data_bytes << "\n";
    }
    return 0;
}

int cmd_query(const std::string& store_path, const std::string& data_path,
              const std::string& ontology_path, const std::string& query_text, bool reasoning,
              bool explain, unsigned repeat, const std::string& format) {
    if (reasoning && store_path.empty() && ontology_path.empty())
        throw skg::Error("--reasoning requires --ontology or a --store image");

    const LoadedStore loaded = load_store(store_path, data_path, ontology_path);
    const skg::parser::QueryAst ast = skg::parser::parse_query(query_text);
    const skg::optimizer::JoinPlan plan = skg::optimizer::make_plan(ast, loaded.kb, reasoning);

    if (explain) {
        std::istringstream lines(plan.explain());
        std::string line;
        while (std::getline(lines, line)) std::cout << "# " << line << "\n";
    }

    std::vector<double> times;
    skg::executor::QueryResult result;
    for (unsigned i = 0; i < std::max(1u, repeat); ++i) {
        const auto start = Clock::now();
        result = skg::executor::run(plan, loaded.kb);
        times.push_back(ms_since(start));
    }

    print_rows(result.columns, result.rows, format);

    std::vector<double> sorted_times = times;
    std::sort(sorted_times.begin(), sorted_times.end());
    const double median = sorted_times[sorted_times.size() / 2];
    std::cout << "# rows\t" << result.rows.size() << "\n";
    if (times.size() > 1) {
        std::cout << "# runs_ms";
        for (double t : times) std::cout << "\t" << t;
        std::cout << "\n";
    }
    std::cout << "# median_ms\t" << median << "\n";
    std::cout << "# answer_hash\t" << std::hex << fnv1a(result.rows) << std::dec << "\n";
    if (result.report.skipped_non_numeric)
        std::cerr << "# rows skipped by non-numeric comparisons: "
                  << result.report.skipped_non_numeric << "\n";
    return 0;
}

int cmd_stats(const std::string& store_path, const std::string& data_path,
              const std::string& ontology_path) {
    const LoadedStore loaded = load_store(store_path, data_path, ontology_path);
    const auto& kb = loaded.kb;
    std::ostringstream sink(std::ios::binary);
    const auto sizes = kb.save(sink);
    std::cout << "object_triples\t" << kb.counts().object_triples << "\n"
              << "datatype_triples\t" << kb.counts().datatype_triples << "\n"
              << "rdf_type_triples\t" << kb.counts().type_triples << "\n"
              << "concept_entries\t" << kb.concepts().size() << "\n"
              << "property_entries\t" << kb.properties().size() << "\n"
              << "instance_entries\t" << kb.instances().size() << "\n"
              << "concept_id_bits\t" << static_cast<int>(kb.concepts().total_bits()) << "\n"
              << "property_id_bits\t" << static_cast<int>(kb.properties().total_bits()) << "\n"
              << "header_bytes\t" << sizes.header_bytes << "\n"
              << "dictionary_bytes\t" << sizes.dictionary_bytes << "\n"
              << "data_bytes\t" << sizes.data_bytes << "\n";
    std::cout << "top_properties";
    std::vector<std::pair<uint64_t, uint64_t>> props;  // (occurrence, id)
    for (const auto& [id, _] : kb.properties().entries())
        if (kb.properties().occurrence(id)) props.emplace_back(kb.properties().occurrence(id), id);
    std::sort(props.rbegin(), props.rend());
    for (std::size_t i = 0; i < std::min<std::size_t>(5, props.size()); ++i)
        std::cout << "\t" << kb.properties().extract(props[i].second) << "="
                  << props[i].first;
    std::cout << "\n";
    return 0;
}

int cmd_bench(const std::vector<std::string>& datasets,
              const std::vector<std::string>& query_files, const std::string& ontology_path,
              bool reasoning, unsigned repeat) {
    std::cout << "dataset,query,stored_triples,build_ms,dictionary_bytes,data_bytes,rss_kb,"
                 "rows,median_ms,answer_hash,status\n";
    for (const std::string& dataset : datasets) {
        skg::store::KnowledgeBase kb;
        double build_ms = 0;
        skg::store::SerializedSizes sizes;
        try {
            const auto start = Clock::now();
            const auto triples = skg::parser::parse_ntriples(read_file(dataset));
            if (!ontology_path.empty()) {
                const auto ontology = skg::parser::parse_ontology(read_file(ontology_path));
                kb = skg::store::KnowledgeBase::build(ontology.graph, triples);
            } else {
                kb = skg::store::KnowledgeBase::build(triples);
            }
            build_ms = ms_since(start);
            std::ostringstream sink(std::ios::binary);
            sizes = kb.save(sink);
        } catch (const std::exception& e) {
            std::cout << csv_escape(dataset) << ",,,,,,,,,," << csv_escape(e.what()) << "\n";
            continue;
        }
        for (const std::string& query_file : query_files) {
            try {
                const auto ast = skg::parser::parse_query(read_file(query_file));
                const auto plan = skg::optimizer::make_plan(ast, kb, reasoning);
                std::vector<double> times;
                skg::executor::QueryResult result;
                for (unsigned i = 0; i < std::max(1u, repeat); ++i) {
                    const auto start = Clock::now();
                    result = skg::executor::run(plan, kb);
                    times.push_back(ms_since(start));
                }
                std::sort(times.begin(), times.end());
                std::cout << csv_escape(dataset) << "," << csv_escape(query_file) << ","
                          << kb.counts().total() << "," << build_ms << ","
                          << sizes.dictionary_bytes << "," << sizes.data_bytes << ","
                          << resident_kb() << "," << result.rows.size() << ","
                          << times[times.size() / 2] << "," << std::hex << fnv1a(result.rows)
                          << std::dec << ",ok\n";
            } catch (const std::exception& e) {
                std::cout << csv_escape(dataset) << "," << csv_escape(query_file)
                          << ",,,,,,,," << csv_escape(e.what()) << "\n";
            }
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Embedded self-indexed RDF store with interval-based RDFS reasoning"};
    app.require_subcommand(1);

    std::string ontology_path, data_path, store_path, query_text, query_file;
    std::string format = "tsv";
    bool reasoning = false, explain = false;
    unsigned repeat = 1;
    std::vector<std::string> datasets, query_files;

    CLI::App* build = app.add_subcommand("build", "Parse data, encode and persist a store image");
    build->add_option("--ontology", ontology_path, "Ontology N-Triples file");
    build->add_option("--data", data_path, "Data N-Triples file")->required();
    build->add_option("--store", store_path, "Output store image path");
    build->add_option("--format", format, "Report format: tsv|json");

    CLI::App* query = app.add_subcommand("query", "Run a query against a store");
    query->add_option("--store", store_path, "Store image path");
    query->add_option("--data", data_path, "Data N-Triples file (in-memory build)");
    query->add_option("--ontology", ontology_path, "Ontology N-Triples file");
    query->add_option("--query", query_text, "Query text");
    query->add_option("--query-file", query_file, "Query file");
    query->add_flag("--reasoning", reasoning, "Rewrite hierarchy constants into id intervals");
    query->add_flag("--explain", explain, "Print the join order and access methods");
    query->add_option("--repeat", repeat, "Timing repetitions");
    query->add_option("--format", format, "Output format: tsv|csv|json");

    CLI::App* stats = app.add_subcommand("stats", "Print store statistics");
    stats->add_option("--store", store_path, "Store image path");
    stats->add_option("--data", data_path, "Data N-Triples file");
    stats->add_option("--ontology", ontology_path, "Ontology N-Triples file");

    CLI::App* bench = app.add_subcommand("bench", "Benchmark datasets x queries (CSV report)");
    bench->add_option("--data", datasets, "Dataset files")->required();
    bench->add_option("--query-file", query_files, "Query files")->required();
    bench->add_option("--ontology", ontology_path, "Ontology N-Triples file");
    bench->add_flag("--reasoning", reasoning, "Rewrite hierarchy constants into id intervals");
    bench->add_option("--repeat", repeat, "Timing repetitions per cell");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (build->parsed()) return cmd_build(ontology_path, data_path, store_path, format);
        if (query->parsed()) {
            if (query_text.empty() && !query_file.empty()) query_text = read_file(query_file);
            if (query_text.empty()) throw skg::Error("--query or --query-file is required");
            return cmd_query(store_path, data_path, ontology_path, query_text, reasoning,
                             explain, repeat, format);
        }
        if (stats->parsed()) return cmd_stats(store_path, data_path, ontology_path);
        if (bench->parsed())
            return cmd_bench(datasets, query_files, ontology_path, reasoning, repeat);
    } catch (const skg::UnsupportedFeature& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const skg::IntegrityError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const skg::FormatError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
