//! Question and option tables of HEDS 1.0.

use super::{OptionDef, Part, Question, QuestionKind, Schema, Sentinel, SCHEMA_VERSION};

struct Q(Question);

impl Q {
    fn new(id: &str, kind: QuestionKind, prompt: &str) -> Self {
        Q(Question {
            id: id.parse().expect("valid built-in id"),
            prompt: prompt.to_string(),
            kind,
            options: Vec::new(),
            allows_na: false,
            sentinels: Vec::new(),
            details_in_other: false,
            help: String::new(),
        })
    }

    fn text(id: &str, prompt: &str) -> Self {
        Q::new(id, QuestionKind::FreeText, prompt)
    }

    fn integer(id: &str, prompt: &str) -> Self {
        Q::new(id, QuestionKind::IntegerText, prompt)
    }

    fn single(id: &str, prompt: &str, options: &[(&str, &str)]) -> Self {
        Q::new(id, QuestionKind::SingleChoice, prompt).options(options)
    }

    fn multi(id: &str, prompt: &str, options: &[(&str, &str)]) -> Self {
        Q::new(id, QuestionKind::MultiChoice, prompt).options(options)
    }

    fn options(mut self, options: &[(&str, &str)]) -> Self {
        self.0.options = options
            .iter()
            .map(|&(key, label)| OptionDef {
                key: key.to_string(),
                label: label.to_string(),
                requires_text: key == "other",
            })
            .collect();
        self
    }

    fn sentinels(mut self, sentinels: &[Sentinel]) -> Self {
        self.0.sentinels = sentinels.to_vec();
        self.0.allows_na = sentinels.contains(&Sentinel::NotApplicable);
        self
    }

    fn na(self) -> Self {
        self.sentinels(&[Sentinel::NotApplicable])
    }

    fn details_in_other(mut self) -> Self {
        self.0.details_in_other = true;
        self
    }

    fn help(mut self, help: &str) -> Self {
        self.0.help = help.to_string();
        self
    }
}

fn part(id: u16, title: &str, questions: Vec<Q>) -> Part {
    Part {
        id,
        title: title.to_string(),
        questions: questions.into_iter().map(|q| q.0).collect(),
    }
}

const DATA_TYPES: [(&str, &str); 3] = [
    ("raw-structured-data", "raw/structured data"),
    ("dlr", "deep linguistic representation (DLR)"),
    ("slr", "shallow linguistic representation (SLR)"),
];

const TEXT_AND_MEDIA_TYPES: [(&str, &str); 9] = [
    ("text-subsentential", "text: subsentential unit of text"),
    ("text-sentence", "text: sentence"),
    ("text-multiple-sentences", "text: multiple sentences"),
    ("text-document", "text: document"),
    ("text-dialogue", "text: dialogue"),
    ("text-other", "text: other"),
    ("speech", "speech"),
    ("visual", "visual"),
    ("multi-modal", "multi-modal"),
];

fn input_types() -> Vec<(&'static str, &'static str)> {
    let mut v: Vec<_> = DATA_TYPES.iter().chain(TEXT_AND_MEDIA_TYPES.iter()).copied().collect();
    v.push(("control-feature", "control feature"));
    v.push(("no-input-human-generation", "no input (human generation)"));
    v.push(("other", "other (please specify)"));
    v
}

fn output_types() -> Vec<(&'static str, &'static str)> {
    let mut v: Vec<_> = DATA_TYPES.iter().chain(TEXT_AND_MEDIA_TYPES.iter()).copied().collect();
    v.push(("human-generated-outputs", "human-generated 'outputs'"));
    v.push(("other", "other (please specify)"));
    v
}

const TASKS: [(&str, &str); 20] = [
    ("content-selection", "content selection/determination"),
    ("content-ordering", "content ordering/structuring"),
    ("aggregation", "aggregation"),
    ("referring-expression-generation", "referring expression generation"),
    ("lexicalisation", "lexicalisation"),
    ("deep-generation", "deep generation"),
    ("surface-realisation", "surface realisation (SLR to text)"),
    ("feature-controlled", "feature-controlled text generation"),
    ("data-to-text", "data-to-text generation"),
    ("dialogue-turn-generation", "dialogue turn generation"),
    ("question-generation", "question generation"),
    ("question-answering", "question answering"),
    ("paraphrasing", "paraphrasing/lossless simplification"),
    ("compression", "compression/lossy simplification"),
    ("machine-translation", "machine translation"),
    ("summarisation", "summarisation (text-to-text)"),
    ("end-to-end", "end-to-end text generation"),
    ("image-video-description", "image/video description"),
    ("post-editing", "post-editing/correction"),
    ("other", "other (please specify)"),
];

fn part1() -> Part {
    part(
        1,
        "Paper and Resources",
        vec![
            Q::text(
                "1.1",
                "Link to paper reporting the evaluation experiment. If the paper reports more than one experiment, state which experiment you're completing this sheet for. Or, if applicable, enter 'for preregistration.'",
            )
            .sentinels(&[Sentinel::ForPreregistration])
            .help("A link to an online copy of the main reference for the human evaluation experiment, identifying which of the experiments the form is being completed for if there are several. If the experiment hasn't been run yet, and the form is being completed for the purpose of submitting it for preregistration, simply enter 'for preregistration'."),
            Q::text(
                "1.2",
                "Link to website providing resources used in the evaluation experiment (e.g. system outputs, evaluation tools, etc.). If there isn't one, enter 'N/A'.",
            )
            .na()
            .help("Link(s) to any resources used in the evaluation experiment, such as system outputs, evaluation tools, etc. If there aren't any publicly shared resources (yet), enter 'N/A'."),
            Q::text(
                "1.3",
                "Name, affiliation and email address of person completing this sheet, and of contact author if different.",
            )
            .help("Names, affiliations and email addresses as appropriate."),
        ],
    )
}

fn part2() -> Part {
    part(
        2,
        "Evaluated System",
        vec![
            Q::multi(
                "2.1",
                "What type of input do the evaluated system(s) take? Select all that apply. If none match, select 'Other' and describe.",
                &input_types(),
            )
            .help("Describe the type of input, where input refers to the representations and/or data structures shared by all evaluated systems. This question is about input type, regardless of number. E.g. if the input is a set of documents, you would still select text: document below."),
            Q::multi(
                "2.2",
                "What type of output do the evaluated system(s) generate? Select all that apply. If none match, select 'Other' and describe.",
                &output_types(),
            )
            .help("Describe the type of input, where input refers to the representations and/or data structures shared by all evaluated systems. This question is about input type, regardless of number. E.g. if the output is a set of documents, you would still select text: document below. Note that the options for outputs are the same as for inputs minus the control feature option."),
            Q::multi(
                "2.3",
                "How would you describe the task that the evaluated system(s) perform in mapping the inputs in Q2.1 to the outputs in Q2.2? Occasionally, more than one of the options below may apply. If none match, select 'Other' and describe.",
                &TASKS,
            )
            .help("This field records the task performed by the system(s) being evaluated. This is independent of the application domain (financial reporting, weather forecasting, etc.), or the specific method (rule-based, neural, etc.) implemented in the system. We indicate mutual constraints between inputs, outputs and task for some of the options below."),
            Q::text("2.4", "Input Language(s), or 'N/A'.")
                .na()
                .help("Any language name(s) that apply, mapped to standardised full language names in ISO 639-1. E.g. English, Herero, Hindi. If no language is accepted as (part of) the input, enter 'N/A'."),
            Q::text("2.5", "Output Language(s), or 'N/A'.")
                .na()
                .help("Any language name(s) that apply, mapped to standardised full language names in ISO 639-1 (2019). E.g. English, Herero, Hindi. If no language is generated, enter 'N/A'."),
        ],
    )
}

fn part3() -> Part {
    part(
        3,
        "Output Sample, Evaluators, Experimental Design",
        vec![
            Q::integer(
                "3.1.1",
                "How many system outputs (or other evaluation items) are evaluated per system in the evaluation experiment? Answer should be an integer.",
            )
            .help("The number of system outputs (or other evaluation items) that are evaluated per system by at least one evaluator in the experiment, as an integer."),
            Q::single(
                "3.1.2",
                "How are system outputs (or other evaluation items) selected for inclusion in the evaluation experiment? If none match, select 'Other' and describe.",
                &[
                    ("random", "by an automatic random process from a larger set"),
                    ("stratified-random", "by an automatic random process but using stratified sampling over given properties"),
                    ("manual-arbitrary", "by manual, arbitrary selection"),
                    ("manual-balanced", "by manual selection aimed at achieving balance or variety relative to given properties"),
                    ("other", "Other (please specify)"),
                ],
            ),
            Q::text("3.1.3", "What is the statistical power of the sample size?")
                .help("The results of a statistical power calculation on the output sample: provide numerical results and a link to the script used (or another way of identifying the script)."),
            Q::integer(
                "3.2.1",
                "How many evaluators are there in this experiment? Answer should be an integer.",
            )
            .help("The total number of evaluators participating in the experiment, as an integer."),
            Q::multi(
                "3.2.2",
                "What kind of evaluators are in this experiment? Select all that apply. If none match, select 'Other' and describe. In all cases, provide details in the text box under 'Other'.",
                &[
                    ("experts", "experts"),
                    ("non-experts", "non-experts"),
                    ("paid", "paid (including non-monetary compensation such as course credits)"),
                    ("not-paid", "not paid"),
                    ("previously-known", "previously known to authors"),
                    ("not-previously-known", "not previously known to authors"),
                    ("includes-authors", "evaluators include one or more of the authors"),
                    ("excludes-authors", "evaluators do not include any of the authors"),
                    ("other", "Other"),
                ],
            )
            .details_in_other()
            .help("Other (fewer than 4 of the above apply): we believe you should be able to tick 4 options of the above. If that's not the case, use this box to explain."),
            Q::text("3.2.3", "How are evaluators recruited?")
                .help("Please explain how your evaluators are recruited. Do you send emails to a given list? Do you post invitations on social media? Posters on university walls? Were there any gatekeepers involved? What are the exclusion/inclusion criteria?"),
            Q::text(
                "3.2.4",
                "What training and/or practice are evaluators given before starting on the evaluation itself?",
            )
            .help("Use this space to describe any training evaluators were given as part of the experiment to prepare them for the evaluation task, including any practice evaluations they did. This includes any introductory explanations they're given, e.g. on the start page of an online evaluation tool."),
            Q::text(
                "3.2.5",
                "What other characteristics do the evaluators have, known either because these were qualifying criteria, or from information gathered as part of the evaluation?",
            )
            .help("Use this space to list any characteristics not covered in previous questions that the evaluators are known to have, either because evaluators were selected on the basis of a characteristic, or because information about a characteristic was collected as part of the evaluation. This might include geographic location of IP address, educational level, or demographic information such as gender, age, etc. Where characteristics differ among evaluators (e.g. gender, age, location etc.), also give numbers for each subgroup."),
            Q::text(
                "3.3.1",
                "Has the experimental design been preregistered? If yes, on which registry?",
            )
            .help("State 'Yes' or 'No'; if 'Yes' also give the name of the registry and a link to the registration page for the experiment."),
            Q::text(
                "3.3.2",
                "How are responses collected? E.g. paper forms, online survey tool, etc.",
            )
            .help("Use this space to describe how you collected responses, e.g. paper forms, Google forms, SurveyMonkey, Mechanical Turk, CrowdFlower, audio/video recording, etc."),
            Q::multi(
                "3.3.3",
                "What quality assurance methods are used? Select all that apply. If none match, select 'Other' and describe. In all cases, provide details in the text box under 'Other'.",
                &[
                    ("native-speakers", "evaluators are required to be native speakers of the language they evaluate"),
                    ("automatic-checks", "automatic quality checking methods are used during/post evaluation"),
                    ("manual-checks", "manual quality checking methods are used during/post evaluation"),
                    ("evaluators-excluded", "evaluators are excluded if they fail quality checks (often or badly enough)"),
                    ("evaluations-excluded", "some evaluations are excluded because of failed quality checks"),
                    ("none-of-the-above", "none of the above"),
                    ("other", "Other (please specify)"),
                ],
            )
            .details_in_other(),
            Q::text(
                "3.3.4",
                "What do evaluators see when carrying out evaluations? Link to screenshot(s) and/or describe the evaluation interface(s).",
            )
            .help("Use this space to describe the interface, paper form, etc. that evaluators see when they carry out the evaluation. Link to a screenshot/copy if possible. If there is a separate introductory interface/page, include it under Question 3.2.4."),
            Q::multi(
                "3.3.5",
                "How free are evaluators regarding when and how quickly to carry out evaluations? Select all that apply. In all cases, provide details in the text box under 'Other'.",
                &[
                    ("time-limited-assessment", "evaluators have to complete each individual assessment within a set time"),
                    ("single-sitting", "evaluators have to complete the whole evaluation in one sitting"),
                    ("neither-of-the-above", "neither of the above"),
                    ("other", "Other (please specify)"),
                ],
            )
            .details_in_other(),
            Q::multi(
                "3.3.6",
                "Are evaluators told they can ask questions about the evaluation and/or provide feedback? Select all that apply. In all cases, provide details in the text box under 'Other'.",
                &[
                    ("questions-before", "evaluators are told they can ask any questions during/after receiving initial training/instructions, and before the start of the evaluation"),
                    ("questions-during", "evaluators are told they can ask any questions during the evaluation"),
                    ("feedback-after", "evaluators are asked for feedback and/or comments after the evaluation, e.g. via an exit questionnaire or a comment box"),
                    ("none-of-the-above", "None of the above"),
                    ("other", "Other (please specify)"),
                ],
            )
            .details_in_other(),
            Q::single(
                "3.3.7",
                "What are the experimental conditions in which evaluators carry out the evaluations? If none match, select 'Other' and describe.",
                &[
                    ("own-choosing", "evaluation carried out by evaluators at a place of their own choosing, e.g. online, using a paper form, etc."),
                    ("lab-same", "evaluation carried out in a lab, and conditions are the same for each evaluator"),
                    ("lab-varying", "evaluation carried out in a lab, and conditions vary for different evaluators"),
                    ("real-life-same", "evaluation carried out in a real-life situation, and conditions are the same for each evaluator"),
                    ("real-life-varying", "evaluation carried out in a real-life situation, and conditions vary for different evaluators"),
                    ("simulated-real-life-same", "evaluation carried out outside of the lab, in a situation designed to resemble a real-life situation, and conditions are the same for each evaluator"),
                    ("simulated-real-life-varying", "evaluation carried out outside of the lab, in a situation designed to resemble a real-life situation, and conditions vary for different evaluators"),
                    ("other", "Other (please specify)"),
                ],
            ),
            Q::text(
                "3.3.8",
                "Unless the evaluation is carried out at a place of the evaluators' own choosing, briefly describe the (range of different) conditions in which evaluators carry out the evaluations.",
            )
            .help("Use this space to describe the variations in the conditions in which evaluators carry out the evaluation, for both situations where those variations are controlled, and situations where they are not controlled."),
        ],
    )
}

fn criterion_block() -> Part {
    part(
        4,
        "Quality Criterion",
        vec![
            Q::single(
                "4.1.1",
                "What type of quality is assessed by the quality criterion?",
                &[("correctness", "Correctness"), ("goodness", "Goodness"), ("features", "Features")],
            ),
            Q::single(
                "4.1.2",
                "Which aspect of system outputs is assessed by the quality criterion?",
                &[
                    ("form", "Form of output"),
                    ("content", "Content of output"),
                    ("both", "Both form and content of output"),
                ],
            ),
            Q::single(
                "4.1.3",
                "Is each output assessed for quality in its own right, or with reference to a system-internal or external frame of reference?",
                &[
                    ("own-right", "Quality of output in its own right"),
                    ("relative-to-input", "Quality of output relative to the input"),
                    ("external-frame", "Quality of output relative to a system-external frame of reference"),
                ],
            ),
            Q::single(
                "4.2.1",
                "Does an individual assessment involve an objective or a subjective judgment?",
                &[("objective", "Objective"), ("subjective", "Subjective")],
            ),
            Q::single(
                "4.2.2",
                "Are outputs assessed in absolute or relative terms?",
                &[("absolute", "Absolute"), ("relative", "Relative")],
            ),
            Q::single(
                "4.2.3",
                "Is the evaluation intrinsic or extrinsic?",
                &[("intrinsic", "Intrinsic"), ("extrinsic", "Extrinsic")],
            ),
            Q::text(
                "4.3.1",
                "What do you call the quality criterion in explanations/interfaces to evaluators? Enter 'N/A' if criterion not named.",
            )
            .na()
            .help("The name you use to refer to the quality criterion in explanations and/or interfaces created for evaluators. Examples of quality criterion names include Fluency, Clarity, Meaning Preservation. If no name is used, state 'N/A'."),
            Q::text(
                "4.3.2",
                "What definition do you give for the quality criterion in explanations/interfaces to evaluators? Enter 'N/A' if no definition given.",
            )
            .na()
            .help("Copy and past the verbatim definition you give to evaluators to explain the quality criterion they're assessing. If you don't explicitly call it a definition, enter the nearest thing to a definition you give them. If you don't give any definition, state 'N/A'."),
            Q::integer(
                "4.3.3",
                "Size of scale or other rating instrument (i.e. how many different possible values there are). Answer should be an integer or 'continuous' (if it's not possible to state how many possible responses there are). Enter 'N/A' if there is no rating instrument.",
            )
            .sentinels(&[Sentinel::NotApplicable, Sentinel::Continuous])
            .help("The number of different response values for this quality criterion. E.g. for a 5-point Likert scale, the size to enter is 5. For two-way forced-choice preference judgments, it is 2; if there's also a no-preference option, enter 3. For a slider that is mapped to 100 different values for the purpose of recording assessments, the size to enter is 100. If no rating instrument is used (e.g. when evaluation gathers post-edits or qualitative feedback only), enter 'N/A'."),
            Q::text(
                "4.3.4",
                "List or range of possible values of the scale or other rating instrument. Enter 'N/A', if there is no rating instrument.",
            )
            .na()
            .help("List, or give the range of, the possible values of the rating instrument. The list or range should be of the size specified in Question 4.3.3. If there are too many to list, use a range. E.g. for two-way forced-choice preference judgments, the list entered might be A better, B better; if there's also a no-preference option, the list might be A better, B better, neither. For a slider that is mapped to 100 different values for the purpose of recording assessments, the range 1--100 might be entered. If no rating instrument is used (e.g. when evaluation gathers post-edits or qualitative feedback only), enter 'N/A'."),
            Q::single(
                "4.3.5",
                "How is the scale or other rating instrument presented to evaluators? If none match, select 'Other' and describe.",
                &[
                    ("multiple-choice", "Multiple-choice options"),
                    ("check-boxes", "Check-boxes"),
                    ("slider", "Slider"),
                    ("na-no-instrument", "N/A (there is no rating instrument)"),
                    ("other", "Other (please specify)"),
                ],
            ),
            Q::text(
                "4.3.6",
                "If there is no rating instrument, describe briefly what task the evaluators perform (e.g. ranking multiple outputs, finding information, playing a game, etc.), and what information is recorded. Enter 'N/A' if there is a rating instrument.",
            )
            .na()
            .help("If (and only if) there is no rating instrument, i.e. you entered 'N/A' for Questions 4.3.3--4.3.5, describe the task evaluators perform in this space. Otherwise, here enter 'N/A' if there is a rating instrument."),
            Q::text(
                "4.3.7",
                "What is the verbatim question, prompt or instruction given to evaluators (visible to them during each individual assessment)?",
            )
            .help("Copy and paste the verbatim text that evaluators see during each assessment, that is intended to convey the evaluation task to them."),
            Q::single(
                "4.3.8",
                "Form of response elicitation. If none match, select 'Other' and describe.",
                &[
                    ("agreement-with-quality-statement", "(dis)agreement with quality statement"),
                    ("direct-quality-estimation", "direct quality estimation"),
                    ("relative-quality-estimation", "relative quality estimation (including ranking)"),
                    ("counting-occurrences", "counting occurrences in text"),
                    ("qualitative-feedback", "qualitative feedback (e.g. via comments entered in a text box)"),
                    ("post-editing-annotation", "evaluation through post-editing/annotation"),
                    ("output-classification", "output classification or labelling"),
                    ("user-text-interaction", "user-text interaction measurements"),
                    ("task-performance", "task performance measurements"),
                    ("user-system-interaction", "user-system interaction measurements"),
                    ("other", "Other (please specify)"),
                ],
            ),
            Q::text(
                "4.3.9",
                "How are raw responses from participants aggregated or otherwise processed to obtain reported scores for this quality criterion? State if no scores reported.",
            )
            .help("Normally a set of separate assessments is collected from evaluators and is converted to the results as reported. Describe here the method(s) used in the conversion(s). E.g. macro-averages or micro-averages are computed from numerical scores to provide summary, per-system results."),
            Q::text(
                "4.3.10",
                "Method(s) used for determining effect size and significance of findings for this quality criterion.",
            )
            .sentinels(&[Sentinel::None])
            .help("A list of methods used for calculating the effect size and significance of any results, both as reported in the paper given in Question 1.1, for this quality criterion. If none calculated, state 'None'."),
            Q::text(
                "4.3.11",
                "Has the inter-annotator and intra-annotator agreement between evaluators for this quality criterion been measured? If yes, what method was used, and what are the agreement scores?",
            )
            .help("The methods used to compute, and results obtained from, any measures of inter-annotator and intra-annotator agreement obtained for the quality criterion."),
        ],
    )
}

fn part5() -> Part {
    part(
        5,
        "Ethics",
        vec![
            Q::text(
                "5.1",
                "Has the evaluation experiment this sheet is being completed for, or the larger study it is part of, been approved by a research ethics committee? If yes, which research ethics committee?",
            )
            .help("Please provide here the name of the body that approved the experiment, or state 'No' if approval has not (yet) been obtained."),
            Q::text(
                "5.2",
                "Do any of the system outputs (or human-authored stand-ins) evaluated, or do any of the responses collected, in the experiment contain personal data (as defined in GDPR Art. 4, §1: https://gdpr.eu/article-4-definitions/)? If yes, describe data and state how addressed.",
            )
            .help("State 'No' if no personal data as defined by GDPR was recorded or collected, otherwise explain how conformity with GDPR requirements such as privacy and security was ensured, e.g. by linking to the (successful) application for ethics approval from Question 5.1."),
            Q::text(
                "5.3",
                "Do any of the system outputs (or human-authored stand-ins) evaluated, or do any of the responses collected, in the experiment contain special category information (as defined in GDPR Art. 9, §1: https://gdpr.eu/article-9-processing-special-categories-of-personal-data-prohibited/)? If yes, describe data and state how addressed.",
            )
            .help("State 'No' if no special-category data as defined by GDPR was recorded or collected, otherwise explain how conformity with GDPR requirements relating to special-category data was ensured, e.g. by linking to the (successful) application for ethics approval from Question 5.1."),
            Q::text(
                "5.4",
                "Have any impact assessments been carried out for the evaluation experiment, and/or any data collected/evaluated in connection with it? If yes, summarise approach(es) and outcomes.",
            )
            .help("Use this box to describe any ex ante or ex post impact assessments that have been carried out in relation to the evaluation experiment, such that the assessment plan and process, as well as the outcomes, were captured in written form. Link to documents if possible. Types of impact assessment include data protection impact assessments, e.g. under GDPR. Environmental and social impact assessment frameworks are also available."),
        ],
    )
}

pub(super) fn build() -> Schema {
    Schema {
        version: SCHEMA_VERSION.to_string(),
        parts: vec![part1(), part2(), part3(), part5()],
        criterion_block: criterion_block(),
        max_criteria: 10,
    }
}
