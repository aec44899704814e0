#include "adasurv/types.hpp"

#include "adasurv/error.hpp"

namespace adasurv {

const char* method_name(Method m) {
    switch (m) {
        case Method::Rsf: return "rsf";
        case Method::Esf: return "esf";
        case Method::AdaRsf: return "ada-rsf";
        case Method::AdaEsf: return "ada-esf";
        case Method::AdaMix: return "ada-mix";
    }
    return "?";
}

const char* aggregation_name(Aggregation a) {
    return a == Aggregation::MeanOfMode ? "mean-of-mode" : "mapped-mean-of-mode";
}

Method parse_method(const std::string& name) {
    if (name == "rsf") return Method::Rsf;
    if (name == "esf") return Method::Esf;
    if (name == "ada-rsf" || name == "adarsf") return Method::AdaRsf;
    if (name == "ada-esf" || name == "adaesf") return Method::AdaEsf;
    if (name == "ada-mix" || name == "adamix") return Method::AdaMix;
    throw ConfigError("unknown method '" + name +
                      "'; valid methods: rsf, esf, ada-rsf, ada-esf, ada-mix");
}

Aggregation parse_aggregation(const std::string& name) {
    if (name == "mean-of-mode") return Aggregation::MeanOfMode;
    if (name == "mapped-mean-of-mode") return Aggregation::MappedMeanOfMode;
    throw ConfigError("unknown aggregation '" + name +
                      "'; valid aggregations: mean-of-mode, mapped-mean-of-mode");
}

}  // namespace adasurv
