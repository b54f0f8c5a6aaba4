#ifndef QASRL_REPORT_H_
#define QASRL_REPORT_H_

#include <string>
#include <vector>

#include "json.hpp"
#include "qasrl/consolidation.h"
#include "qasrl/dataset.h"
#include "qasrl/metrics.h"
#include "qasrl/propbank.h"

namespace qasrl {

using OrderedJson = nlohmann::ordered_json;

// Score as a percentage with one decimal, e.g. 0.8714 -> "87.1". Both the
// table and the machine report use this rendering.
std::string percent(double ratio);

// {config, per_predicate:[{id,tp,fp,fn}], totals:{tp,fp,fn,P,R,F1}}.
// Micro P and R carry their exact numerator/denominator.
OrderedJson eval_report_json(const EvalReport &report);

// Rows of P/R/F1 percentages, one per report, labeled by mode.
std::string eval_table(const std::vector<EvalReport> &reports);

OrderedJson agreement_json(const AgreementReport &report, const EvalConfig &config);
std::string agreement_table(const std::vector<std::pair<EvalConfig, AgreementReport>> &rows);

OrderedJson stats_json(const DatasetStats &stats);
std::string stats_table(const DatasetStats &stats);

OrderedJson cost_json(const CostReport &report, const CostSchedule &schedule);
std::string cost_table(const CostReport &report);

OrderedJson proposal_json(const ConsolidationProposal &proposal,
                          const Sentence &sentence);
std::string proposal_text(const ConsolidationProposal &proposal,
                          const Sentence &sentence);
OrderedJson consolidation_report_json(const ConsolidationReport &report);

OrderedJson propbank_json(const PropBankAgreement &agreement);
std::string propbank_table(const std::vector<PropBankAgreement> &rows);

OrderedJson validation_json(const ValidationReport &report);
std::string validation_text(const ValidationReport &report);

}  // namespace qasrl

#endif  // QASRL_REPORT_H_
