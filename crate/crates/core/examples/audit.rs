//! Prints the erratum audit at μ = 0.01 as CSV, followed by the locations
//! whose closed forms disagree with their oracles at first order.

fn main() -> prtbp_core::Result<()> {
    let entries = prtbp_core::errata::default_audit()?;
    print!("{}", prtbp_core::errata::audit_table(&entries).to_csv());
    println!("# errata: {}", prtbp_core::errata::errata(&entries).join(" "));
    Ok(())
}
