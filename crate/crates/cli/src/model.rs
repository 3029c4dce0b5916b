//! Builds the core objects a config describes.

use invpress_core::caratheodory::SubsetSpec;
use invpress_core::symbolic::derive_symbol_weights;
use invpress_core::systems::{
    compile_sft, itinerary_language, parse_rational, validate_affine, validate_finite_state,
    AffineIntervalSystem, FiniteStateSystem, PartitionValidationReport,
};
use invpress_core::{ControlRange, PartitionSpec, PerSymbolWeights, Symbol, Word, WordLanguage};

use crate::config::{RunConfig, SubsetConfig, System};
use crate::CliError;

pub enum Backend {
    Sft,
    FiniteState(FiniteStateSystem),
    Affine(AffineIntervalSystem),
}

pub struct Model {
    pub range: ControlRange,
    pub spec: PartitionSpec,
    pub backend: Backend,
    /// The admissible-word language, or the reason there is none.
    language: Result<WordLanguage, CliError>,
}

impl Model {
    pub fn build(cfg: &RunConfig) -> Result<Self, CliError> {
        let mut range = ControlRange::new(cfg.controls.values.iter().cloned())?;
        for (name, table) in &cfg.controls.potentials {
            let pairs = table
                .iter()
                .map(|(u, v)| Ok((u.as_str(), v.value()?)))
                .collect::<Result<Vec<_>, CliError>>()?;
            range.insert_potential(name, pairs)?;
        }
        let spec = PartitionSpec::new(&range, cfg.partition.tau, &cfg.partition.words)?;
        let q = spec.num_symbols();

        let (backend, language) = match &cfg.system {
            System::Sft { transitions } => {
                let pairs: Vec<(usize, usize)> = transitions.iter().map(|p| (p[0], p[1])).collect();
                let lang = compile_sft(q, &pairs, Some(&spec))?;
                (Backend::Sft, Ok(lang))
            }
            System::FiniteState {
                states,
                transitions,
                invariant,
                cells,
            } => {
                let triples = transitions
                    .iter()
                    .map(|(x, u, y)| {
                        range
                            .index_of(u)
                            .map(|u| (*x, u, *y))
                            .ok_or_else(|| CliError::Schema(format!("unknown control value `{u}`")))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                let cells = cells
                    .iter()
                    .map(|&[x, s]| {
                        if s == 0 || s > q {
                            Err(CliError::Schema(format!("cell symbol {s} is outside 1..={q}")))
                        } else {
                            Ok((x, (s - 1) as Symbol))
                        }
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                let sys = FiniteStateSystem::new(
                    *states,
                    range.values().len(),
                    &triples,
                    invariant,
                    &cells,
                )?;
                let lang = itinerary_language(&sys, &spec).map_err(CliError::from);
                (Backend::FiniteState(sys), lang)
            }
            System::AffineInterval {
                contraction,
                interval,
                cuts,
            } => {
                let controls = range
                    .values()
                    .iter()
                    .map(|u| parse_rational(u))
                    .collect::<Result<Vec<_>, _>>()?;
                let sys = AffineIntervalSystem::new(
                    parse_rational(contraction)?,
                    controls,
                    (parse_rational(&interval[0])?, parse_rational(&interval[1])?),
                    cuts.iter().map(|c| parse_rational(c)).collect::<Result<_, _>>()?,
                )?;
                let why = CliError::Unsupported(
                    "affine interval systems support `validate` only".into(),
                );
                (Backend::Affine(sys), Err(why))
            }
        };
        Ok(Model {
            range,
            spec,
            backend,
            language,
        })
    }

    pub fn language(&self) -> Result<&WordLanguage, CliError> {
        self.language.as_ref().map_err(Clone::clone)
    }

    pub fn weights(&self, potential: &str) -> Result<PerSymbolWeights, CliError> {
        Ok(derive_symbol_weights(&self.range, &self.spec, potential)?)
    }

    pub fn validate(&self) -> Result<PartitionValidationReport, CliError> {
        Ok(match &self.backend {
            // The relation was already checked against the partition.
            Backend::Sft => PartitionValidationReport::default(),
            Backend::FiniteState(sys) => validate_finite_state(sys, &self.spec)?,
            Backend::Affine(sys) => validate_affine(sys, &self.spec)?,
        })
    }
}

pub fn subset(cfg: &SubsetConfig) -> Result<SubsetSpec, CliError> {
    match cfg {
        SubsetConfig::Keyword(k) if k == "all" => Ok(SubsetSpec::All),
        SubsetConfig::Keyword(k) => Err(CliError::Schema(format!(
            "subset must be \"all\" or {{\"cylinders\": [...]}}, found `{k}`"
        ))),
        SubsetConfig::Cylinders { cylinders } => Ok(SubsetSpec::CylinderUnion(
            cylinders
                .iter()
                .map(|w| Word::from_labels(w))
                .collect::<Result<_, _>>()?,
        )),
    }
}
