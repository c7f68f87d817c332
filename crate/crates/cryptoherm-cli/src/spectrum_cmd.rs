//! `spectrum`: the real energies of the N-site lattice, as a CSV table row
//! or a JSON record.

use cryptoherm::{
    compute_spectrum, parse_f64_or_ratio, spectrum_csv, spectrum_json, to_json_string,
    ModelParams, Result, SpectrumRow,
};

use crate::{write_output, Format, SpectrumArgs};

pub(crate) fn run(args: &SpectrumArgs) -> Result<()> {
    let a = parse_f64_or_ratio(&args.a)?;
    let params = ModelParams::new(args.n, a)?;
    let energies = compute_spectrum(&params)?;
    let data = match args.format {
        Format::Csv => spectrum_csv(&[SpectrumRow {
            n: args.n,
            a_label: args.a.trim().to_string(),
            energies,
        }]),
        Format::Json => to_json_string(&spectrum_json(&params, &energies)),
    };
    write_output(&args.out, &data)
}
