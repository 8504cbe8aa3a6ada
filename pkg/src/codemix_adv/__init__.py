"""Black-box adversarial attacks on code-mixed text classifiers.

The package covers the whole pipeline: corpus loading and tokenization,
token-level language tagging, three dictionary-driven perturbation
techniques, masked-token importance ranking, the greedy attack loop,
and evaluation/reporting, plus a trainable baseline victim and a
JSON-lines adapter for attacking external classifiers.
"""

from .attack import (
    AttackConfig,
    AttackError,
    AttackResult,
    AttackRunOutcome,
    PerturbationStep,
    attack_dataset,
    attack_sentence,
)
from .corpus import (
    Dataset,
    LabeledExample,
    TokenizedSentence,
    detokenize,
    load_dataset,
    normalize,
    save_dataset,
    tokenize,
)
from .importance import CandidateSet, ImportanceScore, rank_tokens, token_importance
from .langid import LangLexicon, LanguageTag, load_lang_lexicon, tag_token, tag_tokens
from .metrics import (
    EvalReport,
    MosAnnotation,
    MosSummary,
    SentenceRecord,
    aggregate_mos,
    attack_success_rate,
    build_report,
    cmi,
    emit_report,
    load_mos,
    load_report,
    macro_f1,
    summary_table,
)
from .perturb import (
    DEFAULT_TECHNIQUE_ORDER,
    PerturbationDicts,
    PerturbationTechnique,
    PhoneticGroupDict,
    RepetitionDict,
    TranslitLexicon,
    apply_technique,
    char_repeat_perturb,
    load_perturbation_dicts,
    perturb_audit,
    subword_perturb,
    switch_word_perturb,
)
from .victim import (
    BaselineModel,
    ExternalOracle,
    InProcessOracle,
    Oracle,
    OracleProtocolError,
    OracleTransportError,
    TrainConfig,
    open_external,
    train_baseline,
)

__version__ = "0.1.0"
