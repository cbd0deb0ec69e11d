#pragma once

// Synthetic university-domain graph with realistic kind shares: typed
// entities, object-property chains (enrollment, employment, organization)
// and short datatype literals. Sized for the compactness and latency checks.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "skg/parser/term.hpp"

namespace testsupport {

struct UniversityGraph {
    std::vector<skg::parser::RawTriple> triples;
    std::string selective_subject;   // student with a handful of courses
    std::string popular_course;      // course taken by ~500 students
    uint64_t popular_course_takers = 0;
};

inline UniversityGraph university_graph(std::mt19937_64& rng, uint64_t students = 13600,
                                        uint64_t professors = 800, uint64_t courses = 2000,
                                        uint64_t departments = 25) {
    using skg::parser::RawTriple;
    using skg::parser::Term;

    const std::string ns = "http://uni.example.org/";
    auto iri = [&](const std::string& local) { return Term::iri(ns + local); };
    auto add = [&](UniversityGraph& g, Term s, const std::string& p, Term o) {
        g.triples.push_back({std::move(s), Term::iri(ns + p), std::move(o)});
    };
    auto typed = [&](UniversityGraph& g, const Term& s, const std::string& concept_name) {
        g.triples.push_back({s, Term::iri(skg::parser::kRdfType), iri(concept_name)});
    };

    UniversityGraph g;
    g.triples.reserve(students * 8 + professors * 8 + courses * 2 + departments * 3);
    const uint64_t pick_mod = 28;  // every 28th student takes the popular course

    for (uint64_t d = 0; d < departments; ++d) {
        const Term dept = iri("dept" + std::to_string(d));
        typed(g, dept, "Department");
        add(g, dept, "subOrganizationOf", iri("university" + std::to_string(d % 3)));
        add(g, dept, "name", Term::literal("Department" + std::to_string(d)));
    }
    for (uint64_t c = 0; c < courses; ++c) {
        const Term course = iri("course" + std::to_string(c));
        typed(g, course, "Course");
        if (c % 2 == 0)
            add(g, course, "name", Term::literal("Course" + std::to_string(c)));
    }
    for (uint64_t p = 0; p < professors; ++p) {
        const Term prof = iri("professor" + std::to_string(p));
        typed(g, prof, p % 3 == 0   ? "FullProfessor"
                       : p % 3 == 1 ? "AssociateProfessor"
                                    : "AssistantProfessor");
        add(g, prof, "worksFor", iri("dept" + std::to_string(p % departments)));
        add(g, prof, "name", Term::literal("Professor" + std::to_string(p)));
        add(g, prof, "teacherOf", iri("course" + std::to_string(rng() % courses)));
        add(g, prof, "teacherOf", iri("course" + std::to_string(rng() % courses)));
        if (p % 2 == 0)
            add(g, prof, "researchInterest", Term::literal("Research" + std::to_string(p % 40)));
    }
    for (uint64_t s = 0; s < students; ++s) {
        const Term student = iri("student" + std::to_string(s));
        typed(g, student, s % 4 == 0 ? "GraduateStudent" : "UndergraduateStudent");
        add(g, student, "memberOf", iri("dept" + std::to_string(s % departments)));
        for (int k = 0; k < 3; ++k)
            add(g, student, "takesCourse",
                iri("course" + std::to_string(1 + rng() % (courses - 1))));
        if (s % pick_mod == 0) {
            add(g, student, "takesCourse", iri("course0"));
            ++g.popular_course_takers;
        }
        add(g, student, "name", Term::literal("Student" + std::to_string(s)));
        if (s % 2 == 0)
            add(g, student, "emailAddress",
                Term::literal("student" + std::to_string(s) + "@uni.example.org"));
        if (s % 3 == 0)
            add(g, student, "age", Term::literal(std::to_string(17 + s % 30)));
        if (s % 5 == 0)
            add(g, student, "undergraduateDegreeFrom",
                iri("university" + std::to_string(s % 3)));
    }

    g.selective_subject = ns + "student7";
    g.popular_course = ns + "course0";
    return g;
}

}  // namespace testsupport
