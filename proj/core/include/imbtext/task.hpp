#pragma once

#include <string>
#include <string_view>

#include "imbtext/error.hpp"

namespace imbtext {

// The three subtasks: document-level genre (multiclass), document-level
// framing (multilabel), paragraph-level technique (multilabel).
enum class Task { T1 = 0, T2 = 1, T3 = 2 };

enum class LabelMode { Multiclass, Multilabel };

// Label injected for T3 paragraphs that carry no technique.
inline constexpr const char* kNoneLabel = "None";

inline LabelMode mode_of(Task task) {
    return task == Task::T1 ? LabelMode::Multiclass : LabelMode::Multilabel;
}

// T3 units are paragraphs; T1/T2 units are whole documents.
inline bool paragraph_level(Task task) { return task == Task::T3; }

inline std::string to_string(Task task) {
    switch (task) {
        case Task::T1: return "T1";
        case Task::T2: return "T2";
        case Task::T3: return "T3";
    }
    return "?";
}

inline Task parse_task(std::string_view name) {
    if (name == "T1" || name == "t1") return Task::T1;
    if (name == "T2" || name == "t2") return Task::T2;
    if (name == "T3" || name == "t3") return Task::T3;
    throw ValidationError("unknown task '" + std::string(name) + "' (expected T1, T2 or T3)");
}

}  // namespace imbtext
