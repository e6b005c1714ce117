#!/usr/bin/env python3
"""Regenerates the offline fixture set. Output is fully determined by SEED."""
import json
import math
import os
import random

SEED = 20240601
HERE = os.path.dirname(os.path.abspath(__file__))

# ---------------------------------------------------------------------------
# Boundaries: one grid of cells per continent, each cell an octagon (corners
# cut) so that bounding boxes over-approximate the shapes.

GRIDS = [
    # continent, code, lon0, lon1, lat0, lat1, cols, rows
    ("North America", "NA", -170.0, -50.0, 10.0, 75.0, 8, 5),
    ("South America", "SA", -82.0, -35.0, -56.0, 10.0, 5, 6),
    ("Europe", "EU", -25.0, 45.0, 36.0, 72.0, 8, 6),
    ("Africa", "AF", -18.0, 45.0, -35.0, 36.0, 8, 7),
    ("Asia", "AS", 45.0, 150.0, 5.0, 75.0, 9, 6),
    ("Oceania", "OC", 110.0, 178.0, -48.0, -5.0, 7, 4),
]
NAMED = {("NA", 2, 6): "United States", ("NA", 3, 6): "Canada", ("EU", 2, 3): "France", ("AS", 3, 5): "China"}


def octagon(x0, x1, y0, y1, frac=0.15):
    c = frac * min(x1 - x0, y1 - y0)
    pts = [(x0 + c, y0), (x1 - c, y0), (x1, y0 + c), (x1, y1 - c), (x1 - c, y1), (x0 + c, y1), (x0, y1 - c),
           (x0, y0 + c)]
    pts = [(round(x, 6), round(y, 6)) for x, y in pts]
    return pts + [pts[0]]


def boundaries():
    feats = []
    for continent, code, lon0, lon1, lat0, lat1, cols, rows in GRIDS:
        dx = (lon1 - lon0) / cols
        dy = (lat1 - lat0) / rows
        for r in range(rows):
            for c in range(cols):
                x0, x1 = lon0 + c * dx, lon0 + (c + 1) * dx
                y0, y1 = lat0 + r * dy, lat0 + (r + 1) * dy
                name = NAMED.get((code, r, c), "%s-%02d-%02d" % (code, r, c))
                feats.append((name, continent, [octagon(x0, x1, y0, y1)]))
    ant = [(-180.0, -90.0), (180.0, -90.0), (180.0, -62.0), (-180.0, -62.0), (-180.0, -90.0)]
    feats.append(("Antarctica", "Antarctica", [ant]))
    feats.append(("Azores", "Europe", [octagon(-32.0, -27.0, 37.0, 40.0)]))
    assert len(feats) == 258, len(feats)
    return {
        "type": "FeatureCollection",
        "features": [{
            "type": "Feature",
            "properties": {"name": n, "continent": cont},
            "geometry": {"type": "Polygon", "coordinates": [[list(p) for p in ring] for ring in rings]},
        } for n, cont, rings in feats],
    }


# ---------------------------------------------------------------------------
# CESM variable catalog

CESM = [
    ("TREFHT", "Reference height temperature", "ATM", "K"),
    ("TREFHTMX", "Maximum reference height temperature over output period", "ATM", "K"),
    ("TREFHTMN", "Minimum reference height temperature over output period", "ATM", "K"),
    ("TS", "Surface temperature (radiative)", "ATM", "K"),
    ("TSMX", "Maximum surface temperature over output period", "ATM", "K"),
    ("TSMN", "Minimum surface temperature over output period", "ATM", "K"),
    ("T", "Temperature", "ATM", "K"),
    ("PRECT", "Total (convective and large-scale) precipitation rate (liq + ice)", "ATM", "m/s"),
    ("PRECC", "Convective precipitation rate (liq + ice)", "ATM", "m/s"),
    ("PRECL", "Large-scale (stable) precipitation rate (liq + ice)", "ATM", "m/s"),
    ("PRECSC", "Convective snow rate (water equivalent)", "ATM", "m/s"),
    ("PRECSL", "Large-scale (stable) snow rate (water equivalent)", "ATM", "m/s"),
    ("PSL", "Sea level pressure", "ATM", "Pa"),
    ("PS", "Surface pressure", "ATM", "Pa"),
    ("U", "Zonal wind", "ATM", "m/s"),
    ("V", "Meridional wind", "ATM", "m/s"),
    ("U10", "10m wind speed", "ATM", "m/s"),
    ("UBOT", "Lowest model level zonal wind", "ATM", "m/s"),
    ("VBOT", "Lowest model level meridional wind", "ATM", "m/s"),
    ("Q", "Specific humidity", "ATM", "kg/kg"),
    ("QREFHT", "Reference height humidity", "ATM", "kg/kg"),
    ("RELHUM", "Relative humidity", "ATM", "percent"),
    ("RHREFHT", "Reference height relative humidity", "ATM", "fraction"),
    ("CLDTOT", "Vertically-integrated total cloud", "ATM", "fraction"),
    ("CLDLOW", "Vertically-integrated low cloud", "ATM", "fraction"),
    ("CLDMED", "Vertically-integrated mid-level cloud", "ATM", "fraction"),
    ("CLDHGH", "Vertically-integrated high cloud", "ATM", "fraction"),
    ("FLNT", "Net longwave flux at top of model", "ATM", "W/m2"),
    ("FSNT", "Net solar flux at top of model", "ATM", "W/m2"),
    ("FLNS", "Net longwave flux at surface", "ATM", "W/m2"),
    ("FSNS", "Net solar flux at surface", "ATM", "W/m2"),
    ("FSDS", "Downwelling solar flux at surface", "ATM", "W/m2"),
    ("FLDS", "Downwelling longwave flux at surface", "ATM", "W/m2"),
    ("LHFLX", "Surface latent heat flux", "ATM", "W/m2"),
    ("SHFLX", "Surface sensible heat flux", "ATM", "W/m2"),
    ("TMQ", "Total (vertically integrated) precipitable water", "ATM", "kg/m2"),
    ("AODVIS", "Aerosol optical depth 550 nm", "ATM", "1"),
    ("AODDUST", "Aerosol optical depth 550 nm dust", "ATM", "1"),
    ("SO2", "Sulfur dioxide concentration", "ATM", "mol/mol"),
    ("O3", "Ozone concentration", "ATM", "mol/mol"),
    ("Z3", "Geopotential height (above sea level)", "ATM", "m"),
    ("OMEGA", "Vertical velocity (pressure)", "ATM", "Pa/s"),
    ("TAUX", "Zonal surface stress", "ATM", "N/m2"),
    ("TAUY", "Meridional surface stress", "ATM", "N/m2"),
    ("SNOWHLND", "Water equivalent snow depth", "ATM", "m"),
    ("ICEFRAC", "Fraction of sfc area covered by sea-ice", "ATM", "fraction"),
    ("LANDFRAC", "Fraction of sfc area covered by land", "ATM", "fraction"),
    ("PBLH", "PBL height", "ATM", "m"),
    ("CAPE", "Convectively available potential energy", "ATM", "J/kg"),
    ("SST", "Sea surface temperature", "OCN", "degC"),
    ("TEMP", "Potential temperature", "OCN", "degC"),
    ("SALT", "Salinity", "OCN", "g/kg"),
    ("SSS", "Sea surface salinity", "OCN", "g/kg"),
    ("SSH", "Sea surface height", "OCN", "cm"),
    ("SSH2", "SSH squared", "OCN", "cm2"),
    ("UVEL", "Velocity in grid-x direction", "OCN", "cm/s"),
    ("VVEL", "Velocity in grid-y direction", "OCN", "cm/s"),
    ("WVEL", "Vertical velocity", "OCN", "cm/s"),
    ("HMXL", "Mixed-layer depth", "OCN", "cm"),
    ("XMXL", "Maximum mixed-layer depth", "OCN", "cm"),
    ("SHF", "Total surface heat flux incl SW", "OCN", "W/m2"),
    ("SFWF", "Virtual salt flux in FW flux formulation", "OCN", "kg/m2/s"),
    ("TAUX_OCN", "Windstress in grid-x direction", "OCN", "dyne/cm2"),
    ("TAUY_OCN", "Windstress in grid-y direction", "OCN", "dyne/cm2"),
    ("PD", "Potential density ref to surface", "OCN", "g/cm3"),
    ("IAGE", "Ideal age", "OCN", "years"),
    ("DIC", "Dissolved inorganic carbon", "OCN", "mmol/m3"),
    ("ALK", "Alkalinity", "OCN", "meq/m3"),
    ("O2", "Dissolved oxygen", "OCN", "mmol/m3"),
    ("NO3", "Dissolved inorganic nitrate", "OCN", "mmol/m3"),
    ("PO4", "Dissolved inorganic phosphate", "OCN", "mmol/m3"),
    ("SiO3", "Dissolved inorganic silicate", "OCN", "mmol/m3"),
    ("photoC_TOT_zint", "Total carbon fixation vertical integral", "OCN", "mmol/m3 cm/s"),
    ("spChl", "Small phytoplankton chlorophyll", "OCN", "mg/m3"),
    ("diatChl", "Diatom chlorophyll", "OCN", "mg/m3"),
    ("MOC", "Meridional overturning circulation", "OCN", "Sverdrups"),
    ("BSF", "Diagnostic barotropic streamfunction", "OCN", "Sverdrups"),
    ("TLAI", "Total projected leaf area index", "LND", "m2/m2"),
    ("GPP", "Gross primary production", "LND", "gC/m2/s"),
    ("NPP", "Net primary production", "LND", "gC/m2/s"),
    ("NEE", "Net ecosystem exchange of carbon", "LND", "gC/m2/s"),
    ("TSOI", "Soil temperature (vegetated landunits only)", "LND", "K"),
    ("TSOI_10CM", "Soil temperature in top 10cm of soil", "LND", "K"),
    ("SOILWATER_10CM", "Soil liquid water + ice in top 10cm of soil", "LND", "kg/m2"),
    ("H2OSOI", "Volumetric soil water (vegetated landunits only)", "LND", "mm3/mm3"),
    ("H2OSNO", "Snow depth (liquid water)", "LND", "mm"),
    ("SNOWDP", "Gridcell mean snow height", "LND", "m"),
    ("FSNO", "Fraction of ground covered by snow", "LND", "unitless"),
    ("QSOIL", "Ground evaporation", "LND", "mm/s"),
    ("QVEGE", "Canopy evaporation", "LND", "mm/s"),
    ("QVEGT", "Canopy transpiration", "LND", "mm/s"),
    ("QRUNOFF_LND", "Total liquid runoff not including correction for land use change", "LND", "mm/s"),
    ("QOVER", "Surface runoff", "LND", "mm/s"),
    ("QDRAI", "Sub-surface drainage", "LND", "mm/s"),
    ("TWS", "Total water storage", "LND", "mm"),
    ("TG", "Ground temperature", "LND", "K"),
    ("TV", "Vegetation temperature", "LND", "K"),
    ("FPSN", "Photosynthesis", "LND", "umol/m2s"),
    ("FIRE", "Emitted infrared (longwave) radiation", "LND", "W/m2"),
    ("ALBD", "Surface albedo (direct)", "LND", "proportion"),
    ("ALBI", "Surface albedo (indirect)", "LND", "proportion"),
    ("BTRAN", "Transpiration beta factor", "LND", "unitless"),
    ("aice", "Ice area (aggregate)", "ICE", "%"),
    ("hi", "Grid cell mean ice thickness", "ICE", "m"),
    ("hs", "Grid cell mean snow thickness", "ICE", "m"),
    ("uvel", "Ice velocity (x)", "ICE", "m/s"),
    ("vvel", "Ice velocity (y)", "ICE", "m/s"),
    ("Tsfc", "Snow/ice surface temperature", "ICE", "C"),
    ("congel", "Congelation ice growth", "ICE", "cm/day"),
    ("frazil", "Frazil ice growth", "ICE", "cm/day"),
    ("meltt", "Top ice melt", "ICE", "cm/day"),
    ("meltb", "Basal ice melt", "ICE", "cm/day"),
    ("fswabs", "Snow/ice/ocn absorbed solar flux", "ICE", "W/m2"),
    ("albsni", "Snow/ice broad band albedo", "ICE", "%"),
    ("RIVER_DISCHARGE_OVER_LAND_LIQ", "MOSART river basin flow: LIQ", "ROF", "m3/s"),
    ("RIVER_DISCHARGE_OVER_LAND_ICE", "MOSART river basin flow: ICE", "ROF", "m3/s"),
    ("TOTAL_DISCHARGE_TO_OCEAN_LIQ", "MOSART total discharge into ocean: LIQ", "ROF", "m3/s"),
    ("TOTAL_DISCHARGE_TO_OCEAN_ICE", "MOSART total discharge into ocean: ICE", "ROF", "m3/s"),
    ("STORAGE_LIQ", "MOSART storage: LIQ", "ROF", "m3"),
    ("QRUNOFF", "Total liquid runoff", "ROF", "mm/s"),
    ("ice_sheet_mask", "Ice sheet mask", "GLC", "1"),
    ("thk", "Ice thickness", "GLC", "m"),
    ("topg", "Bedrock topography", "GLC", "m"),
    ("usurf", "Ice upper surface elevation", "GLC", "m"),
    ("smb", "Surface mass balance", "GLC", "mm/yr water equivalent"),
    ("acab", "Accumulation, ablation rate", "GLC", "m/yr ice"),
    ("SWH", "Significant wave height", "WAV", "m"),
    ("TM01", "Mean wave period", "WAV", "s"),
    ("DIR", "Mean wave direction", "WAV", "degree"),
    ("PEAKF", "Peak wave frequency", "WAV", "Hz"),
]

WORKFLOWS = [
    ("SurrogateModelingWorkflow", "Climate model emulation",
     "Train fast surrogate emulators of Earth system model output to explore scenarios"),
    ("HybridMLPhysicsWorkflow", "Hybrid machine learning and physics",
     "Combine learned components with physical parameterizations in a coupled model"),
    ("EquationDiscoveryWorkflow", "Equation discovery",
     "Recover closed-form governing equations from observational and model data"),
    ("ParameterizationBenchmark", "Subgrid parameterization benchmark",
     "Benchmark subgrid-scale parameterizations against high-resolution reference simulations"),
    ("UncertaintyQuantification", "Uncertainty quantification",
     "Quantify uncertainty in projections using ensembles and probabilistic methods"),
    ("ParameterInferenceWorkflow", "Parameter inference",
     "Calibrate model parameters against observations with Bayesian inference"),
    ("SubseasonalForecastingWorkflow", "Subseasonal forecasting",
     "Forecast temperature and precipitation two to six weeks ahead"),
    ("TransferLearningWorkflow", "Transfer learning",
     "Adapt models trained on simulations to observational datasets"),
]

# ---------------------------------------------------------------------------
# Catalog records

THEMES = [
    dict(topic="OCEANS", term="SEA SURFACE TOPOGRAPHY", vl1="SEA SURFACE HEIGHT", title="Sea Surface Height Anomaly",
         abstract="Gridded sea surface height anomalies from satellite altimetry at 0.25 degree resolution, "
                  "provided as daily fields.", platform=("JASON-3", "Jason-3", "Earth Observation Satellites"),
         org=("NASA/JPL/PODAAC", "Physical Oceanography Distributed Active Archive Center"),
         var=("sla", "Sea level anomaly", "m")),
    dict(topic="OCEANS", term="OCEAN TEMPERATURE", vl1="SEA SURFACE TEMPERATURE", title="Sea Surface Temperature",
         abstract="Blended sea surface temperature analysis combining infrared and microwave radiometers; "
                  "monthly means on a 1 degree grid.", platform=("AQUA", "Earth Observing System, Aqua",
                                                                  "Earth Observation Satellites"),
         org=("NOAA/NCEI", "National Centers for Environmental Information"), var=("sst", "Sea surface temperature", "K")),
    dict(topic="ATMOSPHERE", term="PRECIPITATION", vl1="PRECIPITATION RATE", title="Precipitation Rate",
         abstract="Merged satellite precipitation estimates at 0.1 degree spatial resolution and hourly time steps.",
         platform=("GPM", "Global Precipitation Measurement", "Earth Observation Satellites"),
         org=("NASA/GSFC/SED/ESD/GCDC/GESDISC", "Goddard Earth Sciences Data and Information Services Center"),
         var=("precipitation", "Precipitation rate", "mm/hr")),
    dict(topic="ATMOSPHERE", term="ATMOSPHERIC TEMPERATURE", vl1="SURFACE TEMPERATURE", title="Surface Air Temperature",
         abstract="Near-surface air temperature from station records and reanalysis, aggregated to monthly values.",
         platform=("TERRA", "Earth Observing System, Terra", "Earth Observation Satellites"),
         org=("NASA/GSFC/SED/ESD/GCDC/GESDISC", "Goddard Earth Sciences Data and Information Services Center"),
         var=("tas", "Near-surface air temperature", "K")),
    dict(topic="LAND SURFACE", term="SOILS", vl1="SOIL MOISTURE/WATER CONTENT", title="Soil Moisture",
         abstract="Surface soil moisture retrieved from L-band radiometry on a 36 km grid, daily composites.",
         platform=("SMAP", "Soil Moisture Active Passive", "Earth Observation Satellites"),
         org=("NASA/GSFC/SED/ESD/HBSL/BISB/NSIDC", "National Snow and Ice Data Center DAAC"),
         var=("soil_moisture", "Volumetric soil moisture", "m3/m3")),
    dict(topic="CRYOSPHERE", term="SNOW/ICE", vl1="SNOW COVER", title="Snow Cover Extent",
         abstract="Fractional snow cover from optical imagery at 500 m, with weekly gap-filled composites.",
         platform=("TERRA", "Earth Observing System, Terra", "Earth Observation Satellites"),
         org=("NSIDC", "National Snow and Ice Data Center"), var=("snow_cover", "Snow cover fraction", "percent")),
    dict(topic="CRYOSPHERE", term="SEA ICE", vl1="SEA ICE CONCENTRATION", title="Sea Ice Concentration",
         abstract="Passive microwave sea ice concentration on a 25 km polar stereographic grid; daily and monthly.",
         platform=("DMSP 5D-3/F17", "Defense Meteorological Satellite Program-F17", "Earth Observation Satellites"),
         org=("NSIDC", "National Snow and Ice Data Center"), var=("ice_conc", "Sea ice concentration", "fraction")),
    dict(topic="ATMOSPHERE", term="AEROSOLS", vl1="AEROSOL OPTICAL DEPTH/THICKNESS", title="Aerosol Optical Depth",
         abstract="Aerosol optical depth at 550 nm retrieved over land and ocean at 10 km resolution.",
         platform=("AQUA", "Earth Observing System, Aqua", "Earth Observation Satellites"),
         org=("NASA/GSFC/ESD/LAADS", "Level-1 and Atmosphere Archive and Distribution System"),
         var=("aod", "Aerosol optical depth", "1")),
    dict(topic="OCEANS", term="OCEAN OPTICS", vl1="CHLOROPHYLL", title="Ocean Chlorophyll Concentration",
         abstract="Chlorophyll-a concentration from ocean color radiometry at 4 km, as 8-day and monthly averages.",
         platform=("SUOMI-NPP", "Suomi National Polar-orbiting Partnership", "Earth Observation Satellites"),
         org=("NASA/GSFC/SED/ESD/GCDC/OB.DAAC", "Ocean Biology Distributed Active Archive Center"),
         var=("chlor_a", "Chlorophyll concentration", "mg m-3")),
    dict(topic="ATMOSPHERE", term="ATMOSPHERIC WINDS", vl1="SURFACE WINDS", title="Ocean Surface Wind",
         abstract="Ocean surface vector winds from scatterometry, gridded at 0.25 degree every 6 hours.",
         platform=("METOP-B", "Meteorological Operational Satellite - B", "Earth Observation Satellites"),
         org=("NASA/JPL/PODAAC", "Physical Oceanography Distributed Active Archive Center"),
         var=("wind_speed", "Wind speed", "m s-1")),
    dict(topic="ATMOSPHERE", term="ATMOSPHERIC WATER VAPOR", vl1="WATER VAPOR", title="Total Column Water Vapor",
         abstract="Total precipitable water vapor from infrared sounders, daily on a 1 degree grid.",
         platform=("AQUA", "Earth Observing System, Aqua", "Earth Observation Satellites"),
         org=("NASA/GSFC/SED/ESD/GCDC/GESDISC", "Goddard Earth Sciences Data and Information Services Center"),
         var=("tcwv", "Total column water vapour", "kg m-2")),
    dict(topic="ATMOSPHERE", term="ATMOSPHERIC RADIATION", vl1="OUTGOING LONGWAVE RADIATION",
         title="Top of Atmosphere Radiative Fluxes",
         abstract="Outgoing longwave and reflected shortwave radiation at the top of the atmosphere, monthly.",
         platform=("TERRA", "Earth Observing System, Terra", "Earth Observation Satellites"),
         org=("NASA/LARC/SD/ASDC", "Atmospheric Science Data Center"), var=("olr", "Outgoing longwave radiation", "W m-2")),
]

REGIONS = [
    # name, box (s, w, n, e), location keyword path
    ("Gulf of Maine", (41.0, -71.0, 45.0, -66.0), ["CONTINENT", "NORTH AMERICA", "UNITED STATES OF AMERICA", "MAINE"]),
    ("Western Europe", (43.0, -3.0, 50.0, 7.0), ["CONTINENT", "EUROPE", "WESTERN EUROPE", "FRANCE"]),
    ("East Asia", (25.0, 100.0, 45.0, 125.0), ["CONTINENT", "ASIA", "EASTERN ASIA", "CHINA"]),
    ("Sahel", (10.0, -15.0, 18.0, 30.0), ["CONTINENT", "AFRICA", "WESTERN AFRICA", "SAHEL"]),
    ("Amazon Basin", (-15.0, -75.0, 3.0, -50.0), ["CONTINENT", "SOUTH AMERICA", "BRAZIL", "AMAZON BASIN"]),
    ("Australia", (-40.0, 115.0, -12.0, 150.0), ["CONTINENT", "AUSTRALIA/NEW ZEALAND", "AUSTRALIA"]),
    ("Arctic Ocean", (66.0, -180.0, 90.0, 180.0), ["OCEAN", "ARCTIC OCEAN"]),
    ("Tropical Pacific", (-20.0, -160.0, 5.0, -90.0), ["OCEAN", "PACIFIC OCEAN", "CENTRAL PACIFIC OCEAN"]),
    ("Bering Sea", (52.0, 165.0, 66.0, -160.0), ["OCEAN", "PACIFIC OCEAN", "NORTH PACIFIC OCEAN", "BERING SEA"]),
    ("Global", (-90.0, -180.0, 90.0, 180.0), ["GEOGRAPHIC REGION", "GLOBAL"]),
]


def location_keyword(path):
    keys = ["Category", "Type", "Subregion1", "Subregion2", "Subregion3"]
    return {k: v for k, v in zip(keys, path)}


def rect(box):
    s, w, n, e = box
    return {"WestBoundingCoordinate": w, "NorthBoundingCoordinate": n, "EastBoundingCoordinate": e,
            "SouthBoundingCoordinate": s}


def make_records(rng):
    recs = []
    for i in range(50):
        recs.append(generic_record(rng, i))
    # Planted records at fixed positions.
    recs[41] = battery_record()
    recs[17] = manhattan_decoy()
    recs[23] = reanalysis_record()
    return recs


def concept(i):
    return "C%010d-CLIMKG" % (1200000000 + i + 1)


def generic_record(rng, i):
    theme = THEMES[i % len(THEMES)]
    region = REGIONS[(i * 7 + 3) % len(REGIONS)]
    start_year = 1980 + rng.randrange(0, 30)
    ongoing = rng.random() < 0.4
    end_year = min(2023, start_year + rng.randrange(3, 20))
    version = "%d.%d" % (rng.randrange(1, 5), rng.randrange(0, 3))
    short = "%s_%s_L%d" % (theme["vl1"].split()[0][:6].replace("/", ""), region[0].split()[0].upper()[:6],
                           rng.randrange(2, 5))
    short = "%s_%02d" % (short, i)
    title = "%s %s Level %s V%s" % (region[0], theme["title"], short[-4], version)
    platform = theme["platform"]
    org = theme["org"]
    umm = {
        "ShortName": short,
        "Version": version,
        "EntryTitle": title,
        "Abstract": theme["abstract"] + " Coverage: %s." % region[0],
        "DOI": {"DOI": "10.5067/CLIMKG/%s.%s" % (short, version)},
        "ProcessingLevel": {"Id": "Level %d" % rng.randrange(2, 5)},
        "Platforms": [{"ShortName": platform[0], "LongName": platform[1], "Type": platform[2],
                       "Instruments": [{"ShortName": "INSTR-%s" % platform[0].split()[0]}]}],
        "ScienceKeywords": [{"Category": "EARTH SCIENCE", "Topic": theme["topic"], "Term": theme["term"],
                             "VariableLevel1": theme["vl1"]}],
        "LocationKeywords": [location_keyword(region[2])],
        "TemporalExtents": [{"RangeDateTimes": [{"BeginningDateTime": "%d-01-01T00:00:00.000Z" % start_year}],
                             "EndsAtPresentFlag": ongoing}],
        "SpatialExtent": {"HorizontalSpatialDomain": {"Geometry": {"CoordinateSystem": "CARTESIAN",
                                                                   "BoundingRectangles": [rect(region[1])]}}},
        "DataCenters": [{"Roles": ["ARCHIVER", "DISTRIBUTOR"], "ShortName": org[0], "LongName": org[1]}],
        "RelatedUrls": [
            {"URL": "https://data.example.org/%s/%s.nc" % (short, version), "Type": "GET DATA"},
            {"URL": "https://docs.example.org/%s" % short, "Type": "VIEW RELATED INFORMATION",
             "Description": "User guide"},
        ],
        "ArchiveAndDistributionInformation": {"FileDistributionInformation": [{"Format": "netCDF-4"}]},
        "CollectionDataType": "SCIENCE_QUALITY",
        "ISOTopicCategories": ["CLIMATOLOGY/METEOROLOGY/ATMOSPHERE"],
        "Projects": [{"ShortName": "MEASURES", "LongName": "Making Earth System Data Records for Use in Research"}],
    }
    if not ongoing:
        umm["TemporalExtents"][0]["RangeDateTimes"][0]["EndingDateTime"] = "%d-12-31T23:59:59.999Z" % end_year
    if i % 3 == 0:
        umm["Variables"] = [{"Name": theme["var"][0], "LongName": theme["var"][1], "Units": theme["var"][2]}]
    if i % 4 == 1:
        umm["AdditionalAttributes"] = [{"Name": "grid_spacing", "DataType": "STRING", "Value": "25 km"},
                                       {"Name": "temporal_resolution", "DataType": "STRING", "Value": "daily"}]
    if i % 5 == 2:
        umm["ContactPersons"] = [{"Roles": ["Technical Contact"], "FirstName": "Alex", "LastName": "Rivera%02d" % (i % 7),
                                  "ContactInformation": {"ContactMechanisms": [
                                      {"Type": "Email", "Value": "alex.rivera%02d@example.org" % (i % 7)}]}}]
    if i % 6 == 4:
        umm["DataCenters"][0]["ContactGroups"] = [{"Roles": ["Data Center Contact"], "GroupName": "%s User Services"
                                                   % org[0].split("/")[-1]}]

    s, w, n, e = region[1]
    feed = {
        "id": concept(i),
        "title": title + " (feed)",
        "summary": umm["Abstract"],
        "short_name": short,
        "version_id": version,
        "dataset_id": title,
        "processing_level_id": umm["ProcessingLevel"]["Id"],
        "data_center": org[0],
        "archive_center": org[0],
        "time_start": "%d-01-01T00:00:00.000Z" % start_year,
        "updated": "2023-0%d-15T00:00:00.000Z" % (1 + i % 9),
        "coordinate_system": "CARTESIAN",
        "boxes": ["%g %g %g %g" % (s, w, n, e)],
        "platforms": [platform[0]],
        "organizations": [org[0]],
        "links": [{"rel": "http://esipfed.org/ns/fedsearch/1.1/data#", "href": umm["RelatedUrls"][0]["URL"],
                   "type": "application/x-netcdf"}],
        "online_access_flag": True,
        "browse_flag": False,
        "has_variables": "Variables" in umm,
        "cloud_hosted": i % 2 == 0,
    }
    if not ongoing:
        feed["time_end"] = "%d-12-31T23:59:59.999Z" % end_year
    if i % 8 == 5:
        feed["consortiums"] = ["GEOSS", "CEOS"]
    # A few records exist in one format only; a few have polygon or no geometry.
    if i in (7, 31):
        return concept(i), None, umm
    if i in (13, 38):
        feed["summary"] = feed["summary"] + " Feed-only entry."
        return concept(i), feed, None
    if i == 29:
        del umm["SpatialExtent"]
        del feed["boxes"]
        umm["LocationKeywords"] = []
    if i == 11:
        # Polygon spanning the France cell and its eastern neighbour.
        pts = [(44.0, 0.0), (44.0, 12.0), (48.0, 12.0), (48.0, 0.0), (44.0, 0.0)]
        umm["SpatialExtent"]["HorizontalSpatialDomain"]["Geometry"] = {
            "CoordinateSystem": "CARTESIAN",
            "GPolygons": [{"Boundary": {"Points": [{"Latitude": la, "Longitude": lo} for la, lo in pts]}}]}
        feed["polygons"] = [[" ".join("%g %g" % p for p in pts)]]
        del feed["boxes"]
    return concept(i), feed, umm


def battery_record():
    cid = concept(41)
    umm = {
        "ShortName": "NOS_TIDE_8518750_MONTHLY",
        "Version": "1",
        "EntryTitle": "The Battery, New York Tide Gauge Monthly Mean Sea Level",
        "Abstract": "Monthly mean sea level observed at The Battery tide gauge station in New York Harbor "
                    "from 1950 to the present. Values are monthly means relative to station datum in millimetres.",
        "ProcessingLevel": {"Id": "Level 2"},
        "Platforms": [{"ShortName": "TIDE GAUGES", "Type": "In Situ Ocean-based Platforms",
                       "Instruments": [{"ShortName": "ACOUSTIC TIDE GAUGE"}]}],
        "ScienceKeywords": [{"Category": "EARTH SCIENCE", "Topic": "OCEANS", "Term": "SEA SURFACE TOPOGRAPHY",
                             "VariableLevel1": "SEA LEVEL"}],
        "LocationKeywords": [location_keyword(["CONTINENT", "NORTH AMERICA", "UNITED STATES OF AMERICA", "NEW YORK"])],
        "TemporalExtents": [{"RangeDateTimes": [{"BeginningDateTime": "1950-01-01T00:00:00.000Z"}],
                             "EndsAtPresentFlag": True}],
        "SpatialExtent": {"HorizontalSpatialDomain": {"Geometry": {"CoordinateSystem": "CARTESIAN",
                                                                   "BoundingRectangles": [
                                                                       rect((40.6, -74.1, 40.8, -73.9))]}}},
        "DataCenters": [{"Roles": ["ARCHIVER"], "ShortName": "NOAA/NOS/CO-OPS",
                         "LongName": "Center for Operational Oceanographic Products and Services"}],
        "RelatedUrls": [
            {"URL": "https://tidesandcurrents.noaa.gov/stationhome.html?id=8518750", "Type": "VIEW RELATED INFORMATION",
             "Description": "Station home page"},
            {"URL": "file:data/nyc_battery_tide_gauge.csv", "Type": "GET DATA", "Description": "Monthly means (CSV)"},
        ],
        "AdditionalAttributes": [{"Name": "sampling_interval", "DataType": "STRING", "Value": "monthly"}],
        "Variables": [{"Name": "sea_level", "LongName": "Monthly mean sea level", "Units": "mm"}],
        "Stations": ["The Battery, NY (8518750)"],
        "ArchiveAndDistributionInformation": {"FileDistributionInformation": [{"Format": "CSV"}]},
    }
    feed = {
        "id": cid,
        "title": "The Battery, New York tide gauge",
        "summary": "Tide gauge monthly means for The Battery, New York.",
        "short_name": "NOS_TIDE_8518750_MONTHLY",
        "version_id": "1",
        "data_center": "NOAA/NOS/CO-OPS",
        "time_start": "1950-01-01T00:00:00.000Z",
        "boxes": ["40.6 -74.1 40.8 -73.9"],
        "consortiums": ["GLOSS"],
        "links": [{"rel": "http://esipfed.org/ns/fedsearch/1.1/data#", "href": "file:data/nyc_battery_tide_gauge.csv"}],
    }
    return cid, feed, umm


def manhattan_decoy():
    cid = concept(17)
    umm = {
        "ShortName": "HIST_TIDE_MANHATTAN",
        "Version": "1",
        "EntryTitle": "Historical Tide Records, Lower Manhattan",
        "Abstract": "Digitized historical harbor water level ledgers for Lower Manhattan, 1900 to 1990, "
                    "as annual summaries.",
        "LocationKeywords": [location_keyword(["CONTINENT", "NORTH AMERICA", "UNITED STATES OF AMERICA", "NEW YORK"])],
        "ScienceKeywords": [{"Category": "EARTH SCIENCE", "Topic": "OCEANS", "Term": "SEA SURFACE TOPOGRAPHY",
                             "VariableLevel1": "SEA LEVEL"}],
        "TemporalExtents": [{"RangeDateTimes": [{"BeginningDateTime": "1900-01-01T00:00:00.000Z",
                                                 "EndingDateTime": "1990-12-31T00:00:00.000Z"}]}],
        "SpatialExtent": {"HorizontalSpatialDomain": {"Geometry": {"CoordinateSystem": "CARTESIAN",
                                                                   "BoundingRectangles": [
                                                                       rect((40.69, -74.03, 40.75, -73.96))]}}},
        "DataCenters": [{"ShortName": "NYC/ARCHIVES", "LongName": "New York City Municipal Archives"}],
        "RelatedUrls": [{"URL": "https://archives.example.org/tide-ledgers.json", "Type": "GET DATA"}],
    }
    return cid, None, umm


def reanalysis_record():
    cid = concept(23)
    umm = {
        "ShortName": "SAT_REANALYSIS_MON",
        "Version": "2.1",
        "EntryTitle": "Global Reference Height Temperature Reanalysis, Monthly",
        "Abstract": "Monthly reference height temperature from a global atmospheric reanalysis, 1993 to 2020, "
                    "on a 0.5 degree grid.",
        "ProcessingLevel": {"Id": "Level 4"},
        "Platforms": [{"ShortName": "MODELS", "Type": "Models/Analyses"}],
        "ScienceKeywords": [{"Category": "EARTH SCIENCE", "Topic": "ATMOSPHERE", "Term": "ATMOSPHERIC TEMPERATURE",
                             "VariableLevel1": "SURFACE TEMPERATURE", "VariableLevel2": "AIR TEMPERATURE"}],
        "LocationKeywords": [location_keyword(["GEOGRAPHIC REGION", "GLOBAL"])],
        "TemporalExtents": [{"RangeDateTimes": [{"BeginningDateTime": "1993-01-01T00:00:00.000Z",
                                                 "EndingDateTime": "2020-12-31T23:59:59.999Z"}]}],
        "SpatialExtent": {"HorizontalSpatialDomain": {"Geometry": {"CoordinateSystem": "CARTESIAN",
                                                                   "BoundingRectangles": [
                                                                       rect((-90.0, -180.0, 90.0, 180.0))]}}},
        "DataCenters": [{"ShortName": "NASA/GSFC/GMAO", "LongName": "Global Modeling and Assimilation Office"}],
        "RelatedUrls": [{"URL": "https://data.example.org/reanalysis/t2m_monthly.nc", "Type": "GET DATA"}],
        "Variables": [{"Name": "t2m", "LongName": "Reference height temperature", "Units": "K"}],
    }
    feed = {"id": cid, "title": "Reference height temperature reanalysis", "time_start": "1993-01-01T00:00:00.000Z",
            "time_end": "2020-12-31T23:59:59.999Z", "data_center": "NASA/GSFC/GMAO"}
    return cid, feed, umm


def write_pages(recs, out_dir, per_page=10):
    os.makedirs(out_dir, exist_ok=True)
    for p in range(0, len(recs), per_page):
        chunk = recs[p:p + per_page]
        page = p // per_page + 1
        feed = {"feed": {"updated": "2024-06-01T00:00:00Z", "id": "https://cmr.example.org/search/collections.json",
                         "title": "ECHO dataset metadata",
                         "entry": [f for _, f, _ in chunk if f is not None]}}
        umm = {"hits": len(recs), "took": 12,
               "items": [{"meta": {"concept-id": cid, "provider-id": "CLIMKG", "revision-id": 1}, "umm": u}
                         for cid, _, u in chunk if u is not None]}
        with open(os.path.join(out_dir, "%05d.json" % page), "w") as fh:
            json.dump(feed, fh, indent=1, sort_keys=True)
            fh.write("\n")
        with open(os.path.join(out_dir, "%05d.umm.json" % page), "w") as fh:
            json.dump(umm, fh, indent=1, sort_keys=True)
            fh.write("\n")


def tide_series(rng):
    rows = ["date,sea_level_mm"]
    for year in range(1950, 2021):
        for month in range(1, 13):
            t = (year - 1950) + (month - 1) / 12.0
            seasonal = 40.0 * math.sin(2 * math.pi * (month - 1) / 12.0)
            value = 6950.0 + 3.2 * t + seasonal + rng.gauss(0.0, 15.0)
            rows.append("%04d-%02d,%.1f" % (year, month, value))
    return "\n".join(rows) + "\n"


def main():
    rng = random.Random(SEED)
    with open(os.path.join(HERE, "world.geojson"), "w") as fh:
        json.dump(boundaries(), fh, separators=(",", ":"))
        fh.write("\n")
    write_pages(make_records(rng), os.path.join(HERE, "catalog"))
    with open(os.path.join(HERE, "cesm_vars.csv"), "w") as fh:
        fh.write("name,description,component,units\n")
        for name, desc, comp, units in CESM:
            cells = [name, desc, comp, units]
            fh.write(",".join('"%s"' % c.replace('"', '""') if ("," in c or '"' in c) else c for c in cells) + "\n")
    with open(os.path.join(HERE, "workflows.json"), "w") as fh:
        json.dump([{"label": l, "name": n, "description": d} for l, n, d in WORKFLOWS], fh, indent=2)
        fh.write("\n")
    os.makedirs(os.path.join(HERE, "data"), exist_ok=True)
    with open(os.path.join(HERE, "data", "nyc_battery_tide_gauge.csv"), "w") as fh:
        fh.write(tide_series(random.Random(SEED + 1)))


if __name__ == "__main__":
    main()
