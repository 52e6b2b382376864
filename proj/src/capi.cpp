#include "freiman.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "freiman/generators.hpp"
#include "freiman/runner.hpp"
#include "freiman/set_io.hpp"

struct fr_group {
    freiman::GroupSpec spec;
};

struct fr_set {
    freiman::FiniteSet set;
};

namespace {

thread_local std::string last_error;

fr_status status_of(freiman::ErrorCode code) {
    using freiman::ErrorCode;
    switch (code) {
        case ErrorCode::invalid_argument: return FR_INVALID_ARGUMENT;
        case ErrorCode::parse_error: return FR_PARSE_ERROR;
        case ErrorCode::invalid_element: return FR_INVALID_ELEMENT;
        case ErrorCode::group_mismatch: return FR_GROUP_MISMATCH;
        case ErrorCode::overflow: return FR_OVERFLOW;
        case ErrorCode::empty_set: return FR_EMPTY_SET;
        case ErrorCode::cap_exceeded: return FR_CAP_EXCEEDED;
        case ErrorCode::io_error: return FR_IO_ERROR;
        case ErrorCode::internal_error: return FR_INTERNAL_ERROR;
    }
    return FR_INTERNAL_ERROR;
}

template <class F>
fr_status guarded(F&& f) {
    try {
        last_error.clear();
        return f();
    } catch (const freiman::Error& e) {
        last_error = e.what();
        return status_of(e.code());
    } catch (const std::bad_alloc&) {
        last_error = "out of memory";
        return FR_CAP_EXCEEDED;
    } catch (const std::exception& e) {
        last_error = e.what();
        return FR_INTERNAL_ERROR;
    }
}

fr_status need(const void* p, const char* what) {
    if (p) return FR_OK;
    last_error = std::string(what) + " is null";
    return FR_INVALID_ARGUMENT;
}

char* dup(const std::string& s) {
    auto* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

fr_set* wrap(freiman::FiniteSet s) { return new fr_set{std::move(s)}; }

}  // namespace

#define FR_NEED(p)                                     \
    do {                                               \
        if (auto st_ = need((p), #p); st_ != FR_OK) return st_; \
    } while (0)

extern "C" {

const char* fr_last_error(void) { return last_error.c_str(); }

const char* fr_status_name(fr_status s) {
    switch (s) {
        case FR_OK: return "ok";
        case FR_INVALID_ARGUMENT: return "invalid_argument";
        case FR_PARSE_ERROR: return "parse_error";
        case FR_INVALID_ELEMENT: return "invalid_element";
        case FR_GROUP_MISMATCH: return "group_mismatch";
        case FR_OVERFLOW: return "overflow";
        case FR_EMPTY_SET: return "empty_set";
        case FR_CAP_EXCEEDED: return "cap_exceeded";
        case FR_IO_ERROR: return "io_error";
        case FR_INTERNAL_ERROR: return "internal_error";
        case FR_VERIFY_FAILED: return "verify_failed";
    }
    return "unknown";
}

void fr_string_free(char* s) { std::free(s); }

fr_status fr_group_parse(const char* text, fr_group** out) {
    FR_NEED(text);
    FR_NEED(out);
    return guarded([&] {
        *out = new fr_group{freiman::GroupSpec::parse(text)};
        return FR_OK;
    });
}

fr_status fr_group_describe(const fr_group* g, char** out) {
    FR_NEED(g);
    FR_NEED(out);
    return guarded([&] {
        *out = dup(g->spec.to_string());
        return FR_OK;
    });
}

void fr_group_free(fr_group* g) { delete g; }

fr_status fr_elem_parse(const fr_group* g, const char* text, int64_t* out) {
    FR_NEED(g);
    FR_NEED(text);
    FR_NEED(out);
    return guarded([&] {
        *out = g->spec.parse_elem(text).value;
        return FR_OK;
    });
}

fr_status fr_elem_format(const fr_group* g, int64_t e, char** out) {
    FR_NEED(g);
    FR_NEED(out);
    return guarded([&] {
        g->spec.check(freiman::Elem{e});
        *out = dup(g->spec.format(freiman::Elem{e}));
        return FR_OK;
    });
}

fr_status fr_elem_add(const fr_group* g, int64_t a, int64_t b, int64_t* out) {
    FR_NEED(g);
    FR_NEED(out);
    return guarded([&] {
        *out = g->spec.add(freiman::Elem{a}, freiman::Elem{b}).value;
        return FR_OK;
    });
}

fr_status fr_elem_sub(const fr_group* g, int64_t a, int64_t b, int64_t* out) {
    FR_NEED(g);
    FR_NEED(out);
    return guarded([&] {
        *out = g->spec.sub(freiman::Elem{a}, freiman::Elem{b}).value;
        return FR_OK;
    });
}

fr_status fr_elem_neg(const fr_group* g, int64_t a, int64_t* out) {
    FR_NEED(g);
    FR_NEED(out);
    return guarded([&] {
        *out = g->spec.neg(freiman::Elem{a}).value;
        return FR_OK;
    });
}

fr_status fr_set_create(const fr_group* g, const int64_t* elems, size_t count, fr_set** out) {
    FR_NEED(g);
    FR_NEED(out);
    if (count) FR_NEED(elems);
    return guarded([&] {
        std::vector<freiman::Elem> v;
        v.reserve(count);
        for (size_t i = 0; i < count; ++i) v.push_back(freiman::Elem{elems[i]});
        *out = wrap(freiman::FiniteSet(g->spec, std::move(v)));
        return FR_OK;
    });
}

fr_status fr_set_parse(const char* text, const fr_group* expected, fr_set** out) {
    FR_NEED(text);
    FR_NEED(out);
    return guarded([&] {
        std::optional<freiman::GroupSpec> e;
        if (expected) e = expected->spec;
        *out = wrap(freiman::parse_set_text(text, e));
        return FR_OK;
    });
}

fr_status fr_set_read(const char* path, const fr_group* expected, fr_set** out) {
    FR_NEED(path);
    FR_NEED(out);
    return guarded([&] {
        std::optional<freiman::GroupSpec> e;
        if (expected) e = expected->spec;
        *out = wrap(freiman::read_set_file(path, e));
        return FR_OK;
    });
}

fr_status fr_set_format(const fr_set* s, char** out) {
    FR_NEED(s);
    FR_NEED(out);
    return guarded([&] {
        *out = dup(freiman::format_set_text(s->set));
        return FR_OK;
    });
}

fr_status fr_set_write(const fr_set* s, const char* path) {
    FR_NEED(s);
    FR_NEED(path);
    return guarded([&] {
        freiman::write_set_file(path, s->set);
        return FR_OK;
    });
}

void fr_set_free(fr_set* s) { delete s; }

size_t fr_set_size(const fr_set* s) { return s ? s->set.size() : 0; }

fr_status fr_set_group(const fr_set* s, fr_group** out) {
    FR_NEED(s);
    FR_NEED(out);
    return guarded([&] {
        *out = new fr_group{s->set.group()};
        return FR_OK;
    });
}

fr_status fr_set_elements(const fr_set* s, int64_t* buffer, size_t capacity, size_t* written) {
    FR_NEED(s);
    FR_NEED(written);
    if (capacity < s->set.size()) {
        *written = s->set.size();
        last_error = "buffer too small: need " + std::to_string(s->set.size());
        return FR_INVALID_ARGUMENT;
    }
    if (s->set.size()) FR_NEED(buffer);
    size_t i = 0;
    for (const auto e : s->set) buffer[i++] = e.value;
    *written = i;
    return FR_OK;
}

fr_status fr_set_sum(const fr_set* a, const fr_set* b, fr_set** out) {
    FR_NEED(a);
    FR_NEED(b);
    FR_NEED(out);
    return guarded([&] {
        *out = wrap(freiman::sum_set(a->set, b->set));
        return FR_OK;
    });
}

fr_status fr_set_diff(const fr_set* a, const fr_set* b, fr_set** out) {
    FR_NEED(a);
    FR_NEED(b);
    FR_NEED(out);
    return guarded([&] {
        *out = wrap(freiman::diff_set(a->set, b->set));
        return FR_OK;
    });
}

fr_status fr_set_energy(const fr_set* s, char** exact, double* value) {
    FR_NEED(s);
    return guarded([&] {
        const auto e = freiman::energy_exact(s->set);
        if (exact) *exact = dup(freiman::to_string(e.normalized()));
        if (value) *value = e.value();
        return FR_OK;
    });
}

fr_status fr_generate(const char* spec, fr_set** out) {
    FR_NEED(spec);
    FR_NEED(out);
    return guarded([&] {
        *out = wrap(freiman::generate(freiman::parse_generator_spec(spec)));
        return FR_OK;
    });
}

void fr_extract_options_default(fr_extract_options* o) {
    if (!o) return;
    const freiman::ExtractConfig d;
    o->eps = nullptr;
    o->cmax = nullptr;
    o->slice_cap = d.slice_cap;
    o->pair_cap = d.pair_cap;
    o->seed = d.seed;
    o->reduce_by_stabilizer = d.reduce_by_stabilizer ? 1 : 0;
}

fr_status fr_extract(const fr_set* s, const fr_extract_options* options, const char* config_echo, fr_format format,
                     char** report) {
    FR_NEED(s);
    FR_NEED(report);
    return guarded([&] {
        freiman::ExtractConfig c;
        if (options) {
            if (options->eps) c.eps = freiman::parse_rational(options->eps);
            if (options->cmax) c.cmax = freiman::parse_rational(options->cmax);
            c.slice_cap = options->slice_cap;
            c.pair_cap = options->pair_cap;
            c.seed = options->seed;
            c.reduce_by_stabilizer = options->reduce_by_stabilizer != 0;
        }
        const auto r = freiman::run_pipeline(s->set, c);
        *report = dup(format == FR_FORMAT_CSV ? freiman::render_csv(r)
                                              : freiman::render_json(r, config_echo ? config_echo : ""));
        return FR_OK;
    });
}

fr_status fr_run_extract(const char* run_config_json, char** report) {
    FR_NEED(run_config_json);
    FR_NEED(report);
    return guarded([&] {
        *report = dup(freiman::cmd_extract(freiman::parse_run_config(run_config_json)));
        return FR_OK;
    });
}

fr_status fr_run_generate(const char* spec, const char* out_path, char** text) {
    FR_NEED(spec);
    return guarded([&] {
        std::optional<std::string> path;
        if (out_path) path = out_path;
        const auto t = freiman::cmd_generate(spec, path);
        if (text) *text = dup(t);
        return FR_OK;
    });
}

fr_status fr_verify(const char* suite, uint64_t seed, uint64_t trials, char** summary, char** counterexamples) {
    FR_NEED(suite);
    return guarded([&] {
        const auto r = freiman::cmd_verify(suite, seed, trials);
        if (summary) *summary = dup(r.summary());
        if (counterexamples) *counterexamples = dup(r.counterexamples());
        return r.ok() ? FR_OK : FR_VERIFY_FAILED;
    });
}

}  // extern "C"
