"""Regenerate ``kb_fixture.jsonl``: curated real organizations plus seeded synthetic brands.

    python tests/fixtures/make_fixture_kb.py
"""

import json
import random
from pathlib import Path

REAL = [
    ("ieee_sp", "IEEE Symposium on Security and Privacy",
     ["IEEE S&P", "IEEE Symposium on Security and Privacy", "IEEE Security and Privacy", "Oakland Symposium"],
     ["ieee-security.org", "ieee.org"]),
    ("ieee", "IEEE", ["IEEE", "Institute of Electrical and Electronics Engineers", "IEEE Computer Society"],
     ["ieee.org", "computer.org"]),
    ("acm", "ACM", ["ACM", "Association for Computing Machinery", "ACM CCS"], ["acm.org"]),
    ("usenix", "USENIX", ["USENIX", "USENIX Association", "USENIX Security Symposium"], ["usenix.org"]),
    ("ndss", "NDSS Symposium", ["NDSS", "NDSS Symposium", "Network and Distributed System Security Symposium"],
     ["ndss-symposium.org", "internetsociety.org"]),
    ("paypal", "PayPal", ["PayPal", "PayPal Inc", "PayPal Holdings", "PayPal Service"], ["paypal.com", "paypal.me"]),
    ("apple", "Apple", ["Apple", "Apple Inc", "Apple ID", "iCloud", "App Store"], ["apple.com", "icloud.com", "me.com"]),
    ("microsoft", "Microsoft", ["Microsoft", "Microsoft Corporation", "Microsoft 365", "Office 365", "Outlook",
                                "OneDrive", "Microsoft Teams"],
     ["microsoft.com", "office.com", "outlook.com", "live.com", "onedrive.com"]),
    ("google", "Google", ["Google", "Google LLC", "Gmail", "Google Drive", "Google Workspace", "Google Research"],
     ["google.com", "gmail.com"]),
    ("amazon", "Amazon", ["Amazon", "Amazon.com", "Amazon Prime", "Amazon Web Services", "AWS"],
     ["amazon.com", "amazon.co.uk", "amazonaws.com"]),
    ("netflix", "Netflix", ["Netflix", "Netflix Inc"], ["netflix.com"]),
    ("facebook", "Meta", ["Facebook", "Meta", "Meta Platforms", "Instagram", "WhatsApp"],
     ["facebook.com", "meta.com", "instagram.com", "facebookmail.com", "whatsapp.com"]),
    ("linkedin", "LinkedIn", ["LinkedIn", "LinkedIn Corporation"], ["linkedin.com"]),
    ("twitter", "X", ["Twitter", "X Corp"], ["twitter.com", "x.com"]),
    ("dropbox", "Dropbox", ["Dropbox", "Dropbox Inc"], ["dropbox.com"]),
    ("docusign", "DocuSign", ["DocuSign", "DocuSign Inc", "DocuSign eSignature"], ["docusign.com", "docusign.net"]),
    ("adobe", "Adobe", ["Adobe", "Adobe Inc", "Adobe Acrobat", "Adobe Sign"], ["adobe.com"]),
    ("ups", "UPS", ["UPS", "United Parcel Service", "UPS My Choice"], ["ups.com"]),
    ("fedex", "FedEx", ["FedEx", "Federal Express", "FedEx Delivery Manager"], ["fedex.com"]),
    ("dhl", "DHL", ["DHL", "DHL Express", "Deutsche Post DHL"], ["dhl.com", "dhl.de"]),
    ("usps", "USPS", ["USPS", "United States Postal Service", "US Postal Service"], ["usps.com", "usps.gov"]),
    ("royal_mail", "Royal Mail", ["Royal Mail", "Royal Mail Group", "Parcelforce"], ["royalmail.com", "parcelforce.com"]),
    ("chase", "JPMorgan Chase", ["Chase", "Chase Bank", "JPMorgan Chase", "J.P. Morgan"], ["chase.com", "jpmorgan.com"]),
    ("bank_of_america", "Bank of America", ["Bank of America", "BofA", "Merrill Lynch"], ["bankofamerica.com", "bofa.com"]),
    ("wells_fargo", "Wells Fargo", ["Wells Fargo", "Wells Fargo Bank"], ["wellsfargo.com"]),
    ("citibank", "Citibank", ["Citibank", "Citi", "Citigroup"], ["citi.com", "citibank.com"]),
    ("hsbc", "HSBC", ["HSBC", "HSBC Bank", "HSBC Holdings"], ["hsbc.com", "hsbc.co.uk"]),
    ("barclays", "Barclays", ["Barclays", "Barclays Bank", "Barclaycard"], ["barclays.com", "barclays.co.uk"]),
    ("lloyds", "Lloyds Bank", ["Lloyds Bank", "Lloyds Banking Group"], ["lloydsbank.com", "lloydsbankinggroup.com"]),
    ("santander", "Santander", ["Santander", "Banco Santander", "Santander Bank"], ["santander.com", "santander.co.uk"]),
    ("dbs", "DBS Bank", ["DBS", "DBS Bank", "POSB"], ["dbs.com", "dbs.com.sg"]),
    ("ocbc", "OCBC Bank", ["OCBC", "OCBC Bank", "Oversea-Chinese Banking Corporation"], ["ocbc.com"]),
    ("american_express", "American Express", ["American Express", "Amex", "AmEx Card Services"], ["americanexpress.com", "aexp.com"]),
    ("visa", "Visa", ["Visa", "Visa Inc", "Verified by Visa"], ["visa.com"]),
    ("mastercard", "Mastercard", ["Mastercard", "MasterCard Incorporated"], ["mastercard.com"]),
    ("stripe", "Stripe", ["Stripe", "Stripe Payments"], ["stripe.com"]),
    ("coinbase", "Coinbase", ["Coinbase", "Coinbase Global"], ["coinbase.com"]),
    ("binance", "Binance", ["Binance", "Binance Exchange"], ["binance.com"]),
    ("irs", "IRS", ["IRS", "Internal Revenue Service"], ["irs.gov"]),
    ("hmrc", "HMRC", ["HMRC", "HM Revenue and Customs"], ["hmrc.gov.uk"]),
    ("ato", "Australian Taxation Office", ["ATO", "Australian Taxation Office"], ["ato.gov.au"]),
    ("iras", "IRAS", ["IRAS", "Inland Revenue Authority of Singapore"], ["iras.gov.sg"]),
    ("zoom", "Zoom", ["Zoom", "Zoom Video Communications", "Zoom Meetings"], ["zoom.us", "zoom.com"]),
    ("slack", "Slack", ["Slack", "Slack Technologies"], ["slack.com"]),
    ("salesforce", "Salesforce", ["Salesforce", "Salesforce.com"], ["salesforce.com"]),
    ("github", "GitHub", ["GitHub", "GitHub Inc"], ["github.com"]),
    ("gitlab", "GitLab", ["GitLab", "GitLab Inc"], ["gitlab.com"]),
    ("atlassian", "Atlassian", ["Atlassian", "Jira", "Confluence", "Bitbucket"], ["atlassian.com", "atlassian.net"]),
    ("wetransfer", "WeTransfer", ["WeTransfer"], ["wetransfer.com"]),
    ("spotify", "Spotify", ["Spotify", "Spotify Premium"], ["spotify.com"]),
    ("ebay", "eBay", ["eBay", "eBay Inc"], ["ebay.com", "ebay.co.uk"]),
    ("alibaba", "Alibaba", ["Alibaba", "Alibaba Group", "AliExpress", "Taobao"], ["alibaba.com", "aliexpress.com", "taobao.com"]),
    ("walmart", "Walmart", ["Walmart", "Walmart Inc"], ["walmart.com"]),
    ("costco", "Costco", ["Costco", "Costco Wholesale"], ["costco.com"]),
    ("target", "Target", ["Target Corporation", "Target Stores"], ["target.com"]),
    ("bestbuy", "Best Buy", ["Best Buy", "Geek Squad"], ["bestbuy.com"]),
    ("att", "AT&T", ["AT&T", "AT&T Wireless"], ["att.com", "att.net"]),
    ("verizon", "Verizon", ["Verizon", "Verizon Wireless", "Verizon Fios"], ["verizon.com", "verizonwireless.com"]),
    ("tmobile", "T-Mobile", ["T-Mobile", "T-Mobile US"], ["t-mobile.com"]),
    ("vodafone", "Vodafone", ["Vodafone", "Vodafone Group"], ["vodafone.com", "vodafone.co.uk"]),
    ("singtel", "Singtel", ["Singtel", "Singapore Telecommunications"], ["singtel.com"]),
    ("comcast", "Comcast", ["Comcast", "Xfinity"], ["comcast.com", "comcast.net", "xfinity.com"]),
    ("delta", "Delta Air Lines", ["Delta Air Lines", "Delta SkyMiles"], ["delta.com"]),
    ("united", "United Airlines", ["United Airlines", "MileagePlus"], ["united.com"]),
    ("emirates", "Emirates", ["Emirates", "Emirates Airline", "Emirates Skywards"], ["emirates.com"]),
    ("singapore_airlines", "Singapore Airlines", ["Singapore Airlines", "KrisFlyer"], ["singaporeair.com"]),
    ("booking", "Booking.com", ["Booking.com", "Booking Holdings"], ["booking.com"]),
    ("airbnb", "Airbnb", ["Airbnb", "Airbnb Inc"], ["airbnb.com"]),
    ("expedia", "Expedia", ["Expedia", "Expedia Group"], ["expedia.com"]),
    ("uber", "Uber", ["Uber", "Uber Eats", "Uber Technologies"], ["uber.com"]),
    ("lyft", "Lyft", ["Lyft", "Lyft Inc"], ["lyft.com"]),
    ("mit", "MIT", ["MIT", "Massachusetts Institute of Technology"], ["mit.edu"]),
    ("stanford", "Stanford University", ["Stanford", "Stanford University"], ["stanford.edu"]),
    ("harvard", "Harvard University", ["Harvard", "Harvard University"], ["harvard.edu"]),
    ("cmu", "Carnegie Mellon University", ["Carnegie Mellon University", "CMU", "Carnegie Mellon University CyLab", "CyLab"],
     ["cmu.edu"]),
    ("nus", "National University of Singapore", ["NUS", "National University of Singapore"], ["nus.edu.sg"]),
    ("sjtu", "Shanghai Jiao Tong University", ["SJTU", "Shanghai Jiao Tong University"], ["sjtu.edu.cn"]),
    ("oxford", "University of Oxford", ["University of Oxford", "Oxford University"], ["ox.ac.uk"]),
    ("cambridge", "University of Cambridge", ["University of Cambridge", "Cambridge University"], ["cam.ac.uk"]),
    ("orcid", "ORCID", ["ORCID", "ORCID Inc"], ["orcid.org"]),
    ("springer", "Springer Nature", ["Springer", "Springer Nature", "Nature Portfolio"], ["springer.com", "springernature.com", "nature.com"]),
    ("elsevier", "Elsevier", ["Elsevier", "ScienceDirect"], ["elsevier.com", "sciencedirect.com"]),
    ("wiley", "Wiley", ["Wiley", "John Wiley & Sons"], ["wiley.com"]),
    ("black_hat", "Black Hat", ["Black Hat", "Black Hat USA", "Black Hat Briefings"], ["blackhat.com"]),
    ("defcon", "DEF CON", ["DEF CON", "DEFCON"], ["defcon.org"]),
    ("rsa_conference", "RSA Conference", ["RSA Conference", "RSAC"], ["rsaconference.com"]),
    ("nsf", "National Science Foundation", ["NSF", "National Science Foundation"], ["nsf.gov"]),
    ("nih", "National Institutes of Health", ["NIH", "National Institutes of Health"], ["nih.gov"]),
    ("who", "World Health Organization", ["World Health Organization", "WHO Headquarters"], ["who.int"]),
    ("un", "United Nations", ["United Nations", "UN Secretariat"], ["un.org"]),
    ("red_cross", "Red Cross", ["Red Cross", "American Red Cross", "ICRC"], ["redcross.org", "icrc.org"]),
    ("unicef", "UNICEF", ["UNICEF", "United Nations Children's Fund"], ["unicef.org"]),
    ("norton", "Norton", ["Norton", "NortonLifeLock", "Norton 360"], ["norton.com", "nortonlifelock.com"]),
    ("mcafee", "McAfee", ["McAfee", "McAfee LLC"], ["mcafee.com"]),
    ("kaspersky", "Kaspersky", ["Kaspersky", "Kaspersky Lab"], ["kaspersky.com"]),
    ("trend_micro", "Trend Micro", ["Trend Micro", "Trend Micro Inc"], ["trendmicro.com"]),
    ("cloudflare", "Cloudflare", ["Cloudflare", "Cloudflare Inc"], ["cloudflare.com"]),
    ("godaddy", "GoDaddy", ["GoDaddy", "GoDaddy Inc"], ["godaddy.com"]),
    ("namecheap", "Namecheap", ["Namecheap"], ["namecheap.com"]),
    ("steam", "Steam", ["Steam", "Valve Corporation", "Steam Support"], ["steampowered.com", "valvesoftware.com"]),
    ("playstation", "PlayStation", ["PlayStation", "PlayStation Network", "Sony Interactive Entertainment"], ["playstation.com", "sony.com"]),
    ("nintendo", "Nintendo", ["Nintendo", "Nintendo eShop"], ["nintendo.com"]),
    ("shopify", "Shopify", ["Shopify", "Shopify Inc"], ["shopify.com"]),
    ("intuit", "Intuit", ["Intuit", "QuickBooks", "TurboTax"], ["intuit.com"]),
    ("xero", "Xero", ["Xero", "Xero Limited"], ["xero.com"]),
    ("sap", "SAP", ["SAP", "SAP SE", "SAP Concur"], ["sap.com", "concur.com"]),
    ("oracle", "Oracle", ["Oracle", "Oracle Corporation", "Oracle Cloud"], ["oracle.com"]),
    ("ibm", "IBM", ["IBM", "International Business Machines", "IBM Research"], ["ibm.com"]),
    ("intel", "Intel", ["Intel", "Intel Corporation"], ["intel.com"]),
    ("nvidia", "NVIDIA", ["NVIDIA", "NVIDIA Corporation"], ["nvidia.com"]),
    ("samsung", "Samsung", ["Samsung", "Samsung Electronics"], ["samsung.com"]),
    ("openai", "OpenAI", ["OpenAI", "ChatGPT"], ["openai.com"]),
]

SYLLABLES = [
    "ra", "ven", "tor", "lux", "mar", "qui", "zen", "dal", "bor", "kin", "vel", "sto", "nex", "pra", "lin",
    "gor", "tesa", "vex", "myr", "ola", "cas", "dri", "fen", "hal", "jun", "kor", "lum", "nor", "pel", "quo",
    "ros", "sal", "tam", "ulm", "var", "wen", "xal", "yor", "zar", "bel", "cor", "dex", "ferr", "gal", "hex",
]
INDUSTRY = [
    "Bank", "Capital", "Logistics", "Airlines", "Telecom", "Insurance", "Energy", "Health", "Pharma",
    "University", "Foundation", "Cloud", "Software", "Payments", "Securities", "Motors", "Retail",
    "Media", "Institute", "Labs", "Express", "Credit Union", "Travel", "Games", "Consulting",
]
LEGAL = ["Group", "Holdings", "International", "Corporation", "Partners", "Online", "Services"]


def synthetic(rng, taken, count):
    out = []
    while len(out) < count:
        stem = "".join(rng.choice(SYLLABLES) for _ in range(rng.choice([2, 2, 3]))).capitalize()
        if stem.casefold() in taken or len(stem) < 5:
            continue
        taken.add(stem.casefold())
        ind = rng.choice(INDUSTRY)
        legal = rng.choice(LEGAL)
        aliases = [stem, f"{stem} {ind}", f"{stem} {ind} {legal}"]
        slug = stem.lower()
        domains = sorted({f"{slug}.com", f"{slug}{ind.split()[0].lower()}.com"})
        if rng.random() < 0.3:
            domains.append(f"{slug}.co.uk")
        out.append((f"syn_{slug}", f"{stem} {ind}", aliases, sorted(domains)))
    return out


def main():
    rng = random.Random(20240607)
    taken = {a.casefold() for _, _, aliases, _ in REAL for a in aliases}
    real_aliases = sum(len(a) for _, _, a, _ in REAL)
    need = max(0, 1050 - real_aliases)
    entries = REAL + synthetic(rng, taken, (need + 2) // 3)
    lines = []
    for ident, name, aliases, domains in sorted(entries):
        lines.append(json.dumps({"id": ident, "name": name, "aliases": aliases,
                                 "domains": sorted(set(domains)), "internal": False},
                                ensure_ascii=False))
    out = Path(__file__).with_name("kb_fixture.jsonl")
    out.write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(f"{len(entries)} entries, {sum(len(e[2]) for e in entries)} aliases -> {out}")


if __name__ == "__main__":
    main()
