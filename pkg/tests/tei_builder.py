"""Builds small TEI XML documents shaped like GROBID output, for tests."""

from xml.sax.saxutils import escape

TEI_OPEN = '<TEI xmlns="http://www.tei-c.org/ns/1.0">'


def bibl_entry(title=None, doi=None, trailer="") -> dict:
    return {"title": title, "doi": doi, "trailer": trailer}


def make_tei(abstract=None, sections=(), figures=(), tables=(), footnotes=(),
             references=()) -> str:
    """Assemble a TEI document.

    sections: (heading, [paragraph, ...]) pairs; heading may be "".
    figures/tables: caption strings. references: bibl_entry() dicts.
    """
    parts = [TEI_OPEN, "<teiHeader><profileDesc>"]
    if abstract is not None:
        parts.append(f"<abstract><p>{escape(abstract)}</p></abstract>")
    parts.append("</profileDesc></teiHeader>")
    parts.append("<text><body>")
    for heading, paragraphs in sections:
        parts.append("<div>")
        if heading:
            parts.append(f"<head>{escape(heading)}</head>")
        for para in paragraphs:
            parts.append(f"<p>{escape(para)}</p>")
        parts.append("</div>")
    for caption in figures:
        parts.append(f"<figure><head>Figure</head>"
                     f"<figDesc>{escape(caption)}</figDesc></figure>")
    for caption in tables:
        parts.append(f'<figure type="table"><head>Table</head>'
                     f"<figDesc>{escape(caption)}</figDesc></figure>")
    for note in footnotes:
        parts.append(f'<note place="foot">{escape(note)}</note>')
    parts.append("</body><back><div><listBibl>")
    for entry in references:
        parts.append("<biblStruct>")
        if entry.get("title"):
            parts.append(f'<analytic><title level="a">{escape(entry["title"])}'
                         f"</title></analytic>")
        parts.append("<monogr>")
        if entry.get("doi"):
            parts.append(f'<idno type="DOI">{escape(entry["doi"])}</idno>')
        parts.append("</monogr>")
        if entry.get("trailer"):
            parts.append(f"<note>{escape(entry['trailer'])}</note>")
        parts.append("</biblStruct>")
    parts.append("</listBibl></div></back></text></TEI>")
    return "".join(parts)
