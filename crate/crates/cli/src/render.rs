use std::fmt::Write as _;

use rough_core::verify::LawReport;
use rough_core::{
    cond_lower, cond_upper, rough_prob, ApproximationSpace, CdfMode, Event, Rational, RoughPair, RoughVariable, Step,
};

/// A variance pair that circulates for a particular worked example but does
/// not follow from the lower/upper variance definition.
struct MisquotedVariance {
    lower: (i64, i64),
    upper: (i64, i64),
    quoted: &'static str,
}

const KNOWN_MISQUOTED_VARIANCE: &[MisquotedVariance] =
    &[MisquotedVariance { lower: (5, 3), upper: (4355, 216), quoted: "(0.4, 13.75)" }];

pub fn approx(space: &ApproximationSpace, event: &Event, given: Option<&Event>) -> String {
    let lower = space.lower_inverse(event).expect("event resolved against this space");
    let upper = space.upper_inverse(event).expect("event resolved against this space");
    let exact = space.is_exact(event).expect("event resolved against this space");
    let classical = space.prob(event).expect("event resolved against this space");
    let rough = rough_prob(space, event).expect("event resolved against this space");

    let mut out = String::new();
    let _ = writeln!(out, "event      {}", space.format_event(event));
    let _ = writeln!(out, "lower      {}", space.format_event(&lower));
    let _ = writeln!(out, "upper      {}", space.format_event(&upper));
    let _ = writeln!(out, "exact      {exact}");
    let _ = writeln!(out, "P          {classical}");
    let _ = writeln!(out, "P*         {rough}");
    if let Some(given) = given {
        let show = |r: Result<Rational, rough_core::Error>| match r {
            Ok(q) => q.to_string(),
            Err(_) => "undefined".to_string(),
        };
        let _ = writeln!(out, "given      {}", space.format_event(given));
        let _ = writeln!(out, "P_lower(A|B) {}", show(cond_lower(space, event, given)));
        let _ = writeln!(out, "P_upper(A|B) {}", show(cond_upper(space, event, given)));
    }
    out
}

pub fn variable_report(name: &str, variable: &RoughVariable, mode: CdfMode) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "variable {name} over {} elements", variable.space().len());
    let _ = writeln!(out);

    let rows = variable.singleton_table();
    let cells: Vec<[String; 3]> =
        rows.iter().map(|r| [r.level.to_string(), r.lower.to_string(), r.upper.to_string()]).collect();
    let header = ["u", "P_lower(U=u)", "P_upper(U=u)"];
    let widths: Vec<usize> =
        (0..3).map(|i| cells.iter().map(|c| c[i].len()).chain([header[i].len()]).max().unwrap_or(0)).collect();
    let line = |cols: [&str; 3]| {
        format!("{:<w0$}  {:>w1$}  {:>w2$}", cols[0], cols[1], cols[2], w0 = widths[0], w1 = widths[1], w2 = widths[2])
    };
    let _ = writeln!(out, "{}", line(header));
    for c in &cells {
        let _ = writeln!(out, "{}", line([&c[0], &c[1], &c[2]]));
    }
    let _ = writeln!(out, "c = {}   d = {}", variable.lower_total(), variable.upper_total());
    let _ = writeln!(out);

    let mode_name = match mode {
        CdfMode::SingletonSum => "singleton-sum",
        CdfMode::Event => "event",
    };
    let pw = variable.piecewise_cdf(mode);
    let _ = writeln!(out, "distribution function ({mode_name})");
    let _ = writeln!(out, "F_lower(u):");
    write_steps(&mut out, &pw.lower);
    let _ = writeln!(out, "F_upper(u):");
    write_steps(&mut out, &pw.upper);
    let _ = writeln!(out);

    let variance = variable.variance_direct();
    let _ = writeln!(out, "E*({name})           = {}", variable.expectation());
    let _ = writeln!(out, "V*({name}) direct    = {variance}");
    let _ = writeln!(out, "V*({name}) formula   = {}", variable.variance_formula());
    if let Some(quoted) = misquoted_variance(&variance) {
        let _ = writeln!(
            out,
            "note: {variance} is the variance pair for this variable; the value {quoted} quoted for \
             this example is not reproducible from the definition and is not used"
        );
    }
    out
}

fn misquoted_variance(variance: &RoughPair) -> Option<&'static str> {
    KNOWN_MISQUOTED_VARIANCE.iter().find_map(|m| {
        let lower = Rational::new(m.lower.0, m.lower.1).ok()?;
        let upper = Rational::new(m.upper.0, m.upper.1).ok()?;
        (variance.lower == lower && variance.upper == upper).then_some(m.quoted)
    })
}

fn write_steps(out: &mut String, steps: &[Step]) {
    let bounds: Vec<String> = steps
        .iter()
        .enumerate()
        .map(|(i, step)| {
            let start = match &step.from {
                None => "(-inf".to_string(),
                Some(u) => format!("[{u}"),
            };
            let end = match steps.get(i + 1).and_then(|s| s.from.as_ref()) {
                None => "inf)".to_string(),
                Some(u) => format!("{u})"),
            };
            format!("{start}, {end}")
        })
        .collect();
    let width = bounds.iter().map(String::len).max().unwrap_or(0);
    for (bound, step) in bounds.iter().zip(steps) {
        let _ = writeln!(out, "  {bound:<width$}  {}", step.value);
    }
}

pub fn counterexamples_json(report: &LawReport) -> String {
    report.counterexamples_json()
}
