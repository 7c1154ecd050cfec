//! Text and LaTeX renderings of derived objects.

use std::fmt::Write;

use lhode::derivation::{Derivation, OdeResult, StructureRelation};
use lhode::reduction::{emit_coefficient, emit_ode, emit_reduced, emit_relation, reduce_ode, Format};

fn ode_title(label: &str) -> &'static str {
    match label {
        "ode4_lh" => "fourth-order equation (Laguerre-Hahn)",
        "ode2_form_i" => "second-order equation, form I",
        "ode2_form_ii" => "second-order equation, form II",
        "ode2_wronskian" => "second-order equation, Wronskian form",
        "ode3" => "third-order equation",
        "ode4_semiclassical" => "fourth-order equation (semiclassical)",
        "ode2_classical" => "second-order equation (classical)",
        _ => "equation",
    }
}

/// `A` multiplies the fourth derivative, `E` the function itself.
fn coefficient_letter(derivative: usize) -> char {
    ['E', 'D', 'C', 'B', 'A'][derivative]
}

/// `G03` becomes `G_{0,3}` in LaTeX.
fn coefficient_name(name: &str, format: Format) -> String {
    match format {
        Format::Text => name.to_string(),
        Format::Latex => {
            let (head, digits) = name.split_at(1);
            let sub: Vec<String> = digits.chars().map(String::from).collect();
            format!("{head}_{{{}}}", sub.join(","))
        }
    }
}

pub struct Doc {
    format: Format,
    body: String,
}

impl Doc {
    pub fn new(format: Format) -> Self {
        Doc { format, body: String::new() }
    }

    pub fn heading(&mut self, text: &str) {
        match self.format {
            Format::Text => {
                let _ = writeln!(self.body, "{text}");
            }
            Format::Latex => {
                let _ = writeln!(self.body, "% {text}");
            }
        }
    }

    pub fn note(&mut self, text: &str) {
        match self.format {
            Format::Text => {
                let _ = writeln!(self.body, "  {text}");
            }
            Format::Latex => {
                let _ = writeln!(self.body, "% {text}");
            }
        }
    }

    pub fn math(&mut self, text: &str) {
        match self.format {
            Format::Text => {
                for line in text.lines() {
                    let _ = writeln!(self.body, "  {line}");
                }
            }
            Format::Latex => {
                for line in text.lines() {
                    let _ = writeln!(self.body, "\\[ {line} \\]");
                }
            }
        }
    }

    pub fn blank(&mut self) {
        self.body.push('\n');
    }

    pub fn finish(self) -> String {
        self.body
    }
}

pub fn header(doc: &mut Doc, family: &str, d: &Derivation) {
    doc.heading(&format!("family: {family}"));
    doc.heading(&format!("instance: {}", d.instance().label()));
    doc.blank();
}

pub fn relations(doc: &mut Doc, rels: &[StructureRelation; 4], with_coefficients: bool) {
    let format = doc.format;
    doc.heading("structure relations");
    for rel in rels {
        doc.math(&emit_relation(rel, format));
        if with_coefficients {
            for (name, value) in rel.named() {
                doc.math(&format!("{} = {}", coefficient_name(&name, format), emit_coefficient(&value, format)));
            }
        }
    }
    doc.blank();
}

fn semiclassical_notes(doc: &mut Doc, d: &Derivation) {
    if let Some(s) = &d.semiclassical {
        if let Err(why) = &s.classical {
            doc.heading(ode_title("ode2_classical"));
            doc.note(&format!("not available: {why}"));
            doc.blank();
        }
    }
}

/// Unreduced equations, with a notice for degenerate ones.
pub fn equations(doc: &mut Doc, d: &Derivation) {
    let format = doc.format;
    for (label, ode) in d.odes() {
        doc.heading(ode_title(label));
        if ode.degenerate {
            doc.note("degenerate: every coefficient vanishes identically");
        } else {
            doc.math(&emit_ode(ode, format));
        }
        doc.blank();
    }
    semiclassical_notes(doc, d);
}

fn reduced_one(doc: &mut Doc, label: &str, ode: &OdeResult, with_coefficients: bool) {
    let format = doc.format;
    doc.heading(&format!("{} (reduced)", ode_title(label)));
    match reduce_ode(ode) {
        Err(_) => doc.note("degenerate: every coefficient vanishes identically"),
        Ok(r) => {
            doc.math(&emit_reduced(&r, format));
            if with_coefficients {
                for (i, c) in r.reduced.iter().enumerate() {
                    let letter = coefficient_letter(r.reduced.len() - 1 - i);
                    let name = match format {
                        Format::Text => format!("{letter}"),
                        Format::Latex => format!("\\widehat{{\\mathcal{{{letter}}}}}"),
                    };
                    doc.math(&format!("{name} = {}", emit_coefficient(c, format)));
                }
            }
        }
    }
    doc.blank();
}

pub fn reduced(doc: &mut Doc, d: &Derivation, with_coefficients: bool) {
    for (label, ode) in d.odes() {
        reduced_one(doc, label, ode, with_coefficients);
    }
    semiclassical_notes(doc, d);
}
