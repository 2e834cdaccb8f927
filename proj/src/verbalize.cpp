#include "kpaths/verbalize.hpp"

namespace kpaths {

namespace {

constexpr const char* kSystemText =
    "You are a pharmacodynamics expert. Answer the question using the given knowledge graph "
    "information (if available), essential drug definitions, and your medical expertise.\n"
    "Base your answer on evidence of known interaction mechanisms, pharmacological effects, or "
    "similarities to related compounds, if applicable. Avoid generalizations unless directly "
    "supported.\n"
    "Your answer must be concise and formatted as follows: ##Answer:<your answer>";

std::string instruction_text(DatasetKind kind) {
    switch (kind) {
        case DatasetKind::severity:
            return "Assess the interaction severity and format your answer as: "
                   "##Answer:<Major / Moderate / Minor>";
        case DatasetKind::indication:
            return "Determine the therapeutic indication and format your answer as: "
                   "##Answer:<Disease modifying / Palliates / Nonindication>";
        case DatasetKind::open_interaction:
            return "Identify the mechanism or effect type and format your answer as: "
                   "##Answer:<DrugX mechanism/effect on DrugY>";
    }
    return {};
}

std::string question_text(DatasetKind kind, const QueryPair& query) {
    switch (kind) {
        case DatasetKind::severity:
            return "Determine the severity of interaction when " + query.u_name + " (Drug 1) and " +
                   query.v_name + " (Drug 2) are taken together.";
        case DatasetKind::indication:
            return "Determine the possible effect of using " + query.u_name + " (Drug) for " +
                   query.v_name + " (Disease).";
        case DatasetKind::open_interaction:
            return "Determine the interaction type or therapeutic indication when " + query.u_name +
                   " and " + query.v_name + " are used together.";
    }
    return {};
}

} // namespace

std::string verbalize_relation(const RelationSchema& relation) {
    return relation.is_inverse ? relation.inverse_label : relation.forward_label;
}

std::string kind_descriptor(std::string_view kind) {
    if (normalize_name(kind) == "gene") return "gene";
    return std::string(kind);
}

VerbalizedPath verbalize_path(const KnowledgeGraph& graph, const Path& path,
                              std::optional<EntityId> query_u, std::optional<EntityId> query_v,
                              const VerbalizeOptions& options) {
    auto mention = [&](EntityId id) {
        const Entity& entity = graph.entity(id);
        if ((query_u && *query_u == id) || (query_v && *query_v == id)) {
            return entity.name;
        }
        return entity.name + " (" + kind_descriptor(entity.kind) + ")";
    };

    std::string text;
    for (std::size_t hop = 0; hop < path.hops(); ++hop) {
        const RelationSchema& relation = graph.relation(path.relations[hop]);
        if (hop > 0) {
            // Two-hop sentences ending in passive voice read with a comma
            // before the conjunction.
            const bool comma =
                !options.plain_join && path.hops() == 2 && hop == 1 && relation.is_inverse;
            text += comma ? ", and " : " and ";
        }
        text += mention(path.nodes[hop]);
        text += ' ';
        text += verbalize_relation(relation);
        text += ' ';
        text += mention(path.nodes[hop + 1]);
    }
    return VerbalizedPath{std::move(text), path};
}

PromptSpec build_prompt_spec(const QueryPair& query, const std::vector<VerbalizedPath>& paths,
                             DatasetKind kind) {
    PromptSpec spec;
    spec.dataset_kind = kind;
    spec.system_text = kSystemText;
    spec.instruction_text = instruction_text(kind);
    spec.question_text = question_text(kind, query);
    if (!paths.empty()) {
        std::string block;
        for (std::size_t i = 0; i < paths.size(); ++i) {
            if (i > 0) block += '\n';
            block += paths[i].text;
        }
        spec.kg_block = std::move(block);
    }
    return spec;
}

std::string render_prompt(const PromptSpec& spec, const std::optional<std::string>& definitions) {
    std::string prompt = spec.system_text;
    prompt += "\n\n";
    prompt += spec.instruction_text;
    prompt += "\n\nQuestion:\n";
    prompt += spec.question_text;
    prompt += '\n';
    if (definitions) {
        prompt += "\nDefinitions:\n";
        prompt += *definitions;
        prompt += '\n';
    }
    if (spec.kg_block) {
        prompt += "\nKnowledge Graph Information:\n";
        prompt += *spec.kg_block;
        prompt += '\n';
    }
    return prompt;
}

std::string build_prompt(const QueryPair& query, const std::vector<VerbalizedPath>& paths,
                         DatasetKind kind, const std::optional<std::string>& definitions) {
    return render_prompt(build_prompt_spec(query, paths, kind), definitions);
}

const char* dataset_kind_name(DatasetKind kind) {
    switch (kind) {
        case DatasetKind::severity: return "severity";
        case DatasetKind::indication: return "indication";
        case DatasetKind::open_interaction: return "open_interaction";
    }
    return "severity";
}

std::optional<DatasetKind> dataset_kind_from_name(std::string_view name) {
    if (name == "severity") return DatasetKind::severity;
    if (name == "indication") return DatasetKind::indication;
    if (name == "open_interaction") return DatasetKind::open_interaction;
    return std::nullopt;
}

} // namespace kpaths
