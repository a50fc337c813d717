//
// chemgym - Copyright 2026 The chemgym Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef CHEMGYM_API_H_
#define CHEMGYM_API_H_

#include <string>
#include <string_view>

namespace chemgym::api {

// JSON-string entry points for embedding in other languages. Each takes a
// JSON object and returns one; native errors propagate as chemgym::Error,
// and malformed requests throw SchemaError.
//
// Fields shared by several requests:
//   "vocab": path of a vocabulary file (default: the built-in text
//            vocabulary with every chemical inventory)
//   "seed":  unsigned 64-bit integer, default 0

// {"text", "isolate_inputs"?: true, "vocab"?}
//   -> {"ids": [...], "tokens": [...], "spans": [[format, start, end], ...]}
std::string tokenize(std::string_view request);

// {"ids": [...], "vocab"?} -> {"text"}
std::string detokenize(std::string_view request);

// {"record": {...}, "seed"?, "policy"?: {"p_format_convert", ...}}
//   -> {"record": {...}, "isolate_inputs": bool}
std::string augment_record(std::string_view request);

// {"manifest": path, "n", "seed"?} -> {"records": [...]}
std::string sample_batch(std::string_view request);

// {"task": {...}, "completion": "...", "weights"?: {"format", "think", "task"}}
//   -> {"r_format", "r_think", "r_task", "task_component", "total"}
std::string score(std::string_view request);

// {"rewards": [...], "eps"?} -> {"advantages": [...]}
std::string group_advantages(std::string_view request);

// Dispatches by operation name ("tokenize", "detokenize", "augment_record",
// "sample_batch", "score", "group_advantages") and never throws: failures
// come back as {"error": {"code", "message", "position"?}}.
std::string call(std::string_view op, std::string_view request);

}  // namespace chemgym::api

#endif  // CHEMGYM_API_H_
