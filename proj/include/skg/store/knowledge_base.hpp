#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "skg/litemat/dictionary.hpp"
#include "skg/litemat/ontology.hpp"
#include "skg/parser/term.hpp"
#include "skg/sds/bitmap.hpp"
#include "skg/sds/wavelet_tree.hpp"

namespace skg::store {

enum class TripleKind : uint8_t { Object = 0, Datatype = 1, RdfType = 2 };

inline constexpr uint64_t npos = ~uint64_t(0);

// Dictionary-encoded triple, the input of the low-level assembler.
struct EncodedTriple {
    TripleKind kind = TripleKind::Object;
    uint64_t predicate = 0;  // property id; ignored for rdf:type
    uint64_t subject = 0;    // instance id
    uint64_t object = 0;     // instance id (object kind) or concept id (rdf:type)
    parser::Term literal;    // datatype kind only
};

// P-WT | PS-BM | S-WT | SO-BM alternation shared by the object and datatype
// chains. Properties appear once each, ascending; a set PS bit starts a
// property's block of subject entries; a set SO bit starts a subject entry's
// run of object slots. Subjects are ascending within a block and object slots
// ascending within an entry, which is what range search and merge joins lean on.
class ChainIndex {
public:
    ChainIndex() = default;
    ChainIndex(sds::WaveletTree properties, sds::BitMap ps_marks, sds::WaveletTree subjects,
               sds::BitMap so_marks, uint64_t object_slots);

    [[nodiscard]] uint64_t property_count() const { return properties_.size(); }
    [[nodiscard]] uint64_t subject_entries() const { return subjects_.size(); }
    [[nodiscard]] uint64_t object_slots() const { return object_slots_; }

    [[nodiscard]] uint64_t property_at(uint64_t pos) const { return properties_.access(pos); }
    [[nodiscard]] uint64_t subject_at(uint64_t entry) const { return subjects_.access(entry); }

    // Position of p in the property layer, or npos when absent.
    [[nodiscard]] uint64_t property_position(uint64_t p) const;
    // First block position whose property id is >= id.
    [[nodiscard]] uint64_t lower_bound_block(uint64_t id) const;

    // [sBegin, sEnd) of a property block; the sentinel select covers the last one.
    [[nodiscard]] std::pair<uint64_t, uint64_t> subject_range(uint64_t prop_pos) const;
    // [oBegin, oEnd) of one subject entry.
    [[nodiscard]] std::pair<uint64_t, uint64_t> object_range(uint64_t subject_entry) const;
    // Object slots spanned by a whole subject range (property block totals).
    [[nodiscard]] std::pair<uint64_t, uint64_t> block_object_range(uint64_t s_begin,
                                                                   uint64_t s_end) const;

    // Subject entries holding s inside [sBegin, sEnd); at most one per block.
    [[nodiscard]] std::vector<uint64_t> find_subject(uint64_t s_begin, uint64_t s_end,
                                                     uint64_t s) const;
    // Subject entry owning an object slot.
    [[nodiscard]] uint64_t entry_of_slot(uint64_t slot) const;

    [[nodiscard]] uint64_t triple_count(uint64_t p) const;

    [[nodiscard]] const sds::WaveletTree& properties() const { return properties_; }
    [[nodiscard]] const sds::BitMap& ps_marks() const { return ps_marks_; }
    [[nodiscard]] const sds::WaveletTree& subjects() const { return subjects_; }
    [[nodiscard]] const sds::BitMap& so_marks() const { return so_marks_; }

    void save(std::ostream& out) const;
    static ChainIndex load(std::istream& in);

private:
    sds::WaveletTree properties_;
    sds::BitMap ps_marks_;
    sds::WaveletTree subjects_;
    sds::BitMap so_marks_;
    uint64_t object_slots_ = 0;
};

struct ObjectTripleStore {
    ChainIndex chain;
    sds::WaveletTree objects;  // instance ids, triple order

    [[nodiscard]] uint64_t size() const { return objects.size(); }
};

struct DatatypeTripleStore {
    ChainIndex chain;
    std::vector<parser::Term> literal_table;  // lexical forms in triple order

    [[nodiscard]] uint64_t size() const { return literal_table.size(); }
};

// Ordered maps over the rdf:type triples; the two maps are transposes.
class RdfTypeStore {
public:
    void build(std::vector<std::pair<uint64_t, uint64_t>> concept_subject_pairs);

    [[nodiscard]] const std::vector<uint64_t>* subjects_of(uint64_t concept_id) const;
    [[nodiscard]] const std::vector<uint64_t>* concepts_of(uint64_t subject_id) const;
    [[nodiscard]] std::vector<uint64_t> subjects_in(const litemat::IdInterval& interval) const;
    [[nodiscard]] bool subject_typed_in(uint64_t subject_id,
                                        const std::vector<litemat::IdInterval>& cover) const;

    [[nodiscard]] uint64_t size() const { return triple_count_; }
    [[nodiscard]] const std::map<uint64_t, std::vector<uint64_t>>& by_concept() const {
        return by_concept_;
    }
    [[nodiscard]] const std::map<uint64_t, std::vector<uint64_t>>& by_subject() const {
        return by_subject_;
    }

    void save(std::ostream& out) const;
    static RdfTypeStore load(std::istream& in);

private:
    std::map<uint64_t, std::vector<uint64_t>> by_concept_;
    std::map<uint64_t, std::vector<uint64_t>> by_subject_;
    uint64_t triple_count_ = 0;
};

struct PropertyStats {
    uint64_t triples = 0;
    uint64_t distinct_subjects = 0;
    uint64_t distinct_objects = 0;
};

struct BuildCounts {
    uint64_t pre_dedup = 0;
    uint64_t object_triples = 0;
    uint64_t datatype_triples = 0;
    uint64_t type_triples = 0;

    [[nodiscard]] uint64_t total() const {
        return object_triples + datatype_triples + type_triples;
    }
};

struct SerializedSizes {
    uint64_t header_bytes = 0;
    uint64_t dictionary_bytes = 0;
    uint64_t data_bytes = 0;

    [[nodiscard]] uint64_t total() const {
        return header_bytes + dictionary_bytes + data_bytes;
    }
};

// The full store: three dictionaries, the object-property chain, the datatype
// chain with its flat literal table, and the ordered rdf:type store.
// Immutable once built; evaluation methods are safe for concurrent readers.
class KnowledgeBase {
public:
    KnowledgeBase() = default;

    // High-level load path: classifies raw triples, materializes domain/range
    // typing, encodes dictionaries and assembles the stores.
    static KnowledgeBase build(const litemat::OntologyGraph& ontology,
                               const std::vector<parser::RawTriple>& triples);
    static KnowledgeBase build(const std::vector<parser::RawTriple>& triples);

    // Low-level assembler over already-encoded triples. Throws IntegrityError
    // when any id does not resolve against the given dictionaries.
    static KnowledgeBase assemble(litemat::Dictionary concepts, litemat::Dictionary properties,
                                  litemat::Dictionary instances,
                                  std::vector<EncodedTriple> triples, uint64_t pre_dedup_count);

    // --- object / datatype chain evaluation -------------------------------
    [[nodiscard]] uint64_t property_triple_count(uint64_t p) const;
    [[nodiscard]] std::vector<uint64_t> objects(uint64_t s, uint64_t p) const;
    [[nodiscard]] std::vector<uint64_t> subjects_with_object(uint64_t p, uint64_t o) const;
    [[nodiscard]] std::vector<std::tuple<uint64_t, uint64_t, uint64_t>> object_pairs(
        const litemat::IdInterval& properties) const;  // (p, s, o), PSO order

    [[nodiscard]] std::vector<uint64_t> literal_slots(uint64_t s, uint64_t p) const;
    [[nodiscard]] std::vector<std::tuple<uint64_t, uint64_t, uint64_t>> datatype_pairs(
        const litemat::IdInterval& properties) const;  // (p, s, slot)

    // Spec surface for datatype lookups; KindError when p only has object triples.
    [[nodiscard]] std::vector<parser::Term> eval_datatype(uint64_t s, uint64_t p) const;
    template <typename Pred>
    [[nodiscard]] std::vector<std::pair<uint64_t, uint64_t>> eval_datatype_filtered(
        uint64_t p, Pred&& keep) const {  // (subject, slot)
        std::vector<std::pair<uint64_t, uint64_t>> out;
        for (const auto& [prop, s, slot] : datatype_pairs({p, p + 1}))
            if (keep(literal_table(slot))) out.emplace_back(s, slot);
        return out;
    }

    // --- rdf:type store ----------------------------------------------------
    [[nodiscard]] std::vector<uint64_t> typed_subjects(const litemat::IdInterval& concepts) const;
    [[nodiscard]] std::vector<uint64_t> typed_subjects(
        const std::vector<litemat::IdInterval>& cover) const;
    [[nodiscard]] std::vector<uint64_t> types_of(uint64_t subject) const;
    [[nodiscard]] bool subject_typed_in(uint64_t subject,
                                        const std::vector<litemat::IdInterval>& cover) const;

    // --- whole-store -------------------------------------------------------
    [[nodiscard]] std::vector<parser::RawTriple> decode_all() const;
    [[nodiscard]] parser::Term decode_instance(uint64_t id) const;

    SerializedSizes save(std::ostream& out) const;
    static KnowledgeBase load(std::istream& in);

    [[nodiscard]] const litemat::Dictionary& concepts() const { return concepts_; }
    [[nodiscard]] const litemat::Dictionary& properties() const { return properties_; }
    [[nodiscard]] const litemat::Dictionary& instances() const { return instances_; }
    [[nodiscard]] const ObjectTripleStore& object_store() const { return object_store_; }
    [[nodiscard]] const DatatypeTripleStore& datatype_store() const { return datatype_store_; }
    [[nodiscard]] const RdfTypeStore& type_store() const { return type_store_; }
    [[nodiscard]] const BuildCounts& counts() const { return counts_; }
    [[nodiscard]] const parser::Term& literal_table(uint64_t slot) const;

    [[nodiscard]] const PropertyStats* object_property_stats(uint64_t p) const;
    [[nodiscard]] const PropertyStats* datatype_property_stats(uint64_t p) const;

private:
    void compute_property_stats();

    litemat::Dictionary concepts_;
    litemat::Dictionary properties_;
    litemat::Dictionary instances_;
    ObjectTripleStore object_store_;
    DatatypeTripleStore datatype_store_;
    RdfTypeStore type_store_;
    BuildCounts counts_;
    std::unordered_map<uint64_t, PropertyStats> object_stats_;
    std::unordered_map<uint64_t, PropertyStats> datatype_stats_;
};

// Term <-> dictionary key helpers shared with the executor and CLI.
parser::Term key_to_term(const std::string& key);

}  // namespace skg::store
